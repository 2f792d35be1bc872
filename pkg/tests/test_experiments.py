import math

import pytest

from curvegraph.errors import NotAutomorphism, PreconditionError
from curvegraph.experiments import (QHType, catalog_lengths, fixtures, length_preservation_check,
                                    proportionality_check, qh_convergence, replay_witness,
                                    rigidity_witness, thurston_csv, thurston_lower)
from curvegraph.graph import build_graph, induced_map
from curvegraph.hyperbolic import holonomy_from_fn
from curvegraph.mapping_class import MappingClassWord, humphries_curves
from test_graph import DELTA


def test_qh_type():
    assert QHType()(7) == 7.0
    f = QHType((1, 4, 9, 16))
    assert f(3) == 9.0 and f.grows(4)
    with pytest.raises(PreconditionError):
        QHType((1, -1))
    with pytest.raises(PreconditionError):
        f(5)


def test_convergence(h_base):
    c1, c2 = humphries_curves(2)[:2]
    t = qh_convergence(h_base, 1, c2, 12)
    assert t.intersection == 1
    assert t.limit == pytest.approx(2.0, abs=1e-9)
    ratios = [r[2] for r in t.rows]
    assert abs(ratios[-1] - t.limit) < abs(ratios[0] - t.limit)
    assert t.to_csv().splitlines()[0] == "n,length,ratio,residual"


def test_convergence_disjoint_rejected(h_base):
    with pytest.raises(PreconditionError):
        qh_convergence(h_base, 1, humphries_curves(2)[2], 5)


def test_thurston(fx, cat3):
    h = holonomy_from_fn(fx["base"])
    r = thurston_lower(h, h, cat3)
    assert r["forward"][0] == 0.0 and r["reverse"][0] == 0.0
    s = thurston_lower(h, holonomy_from_fn(fx["scaled"]), cat3)
    assert s["forward"][0] > 0
    # pants curves scale exactly by 1.1 and nothing grows faster in this window
    assert s["forward"][0] >= math.log(1.1) - 1e-12
    assert thurston_csv(s).startswith("direction,value,argmax_curve_id\n")


def test_proportionality(cat3, G3):
    LX = G3.lengths
    r = proportionality_check(LX, {i: 2 * x for i, x in LX.items()}, G3)
    assert r["k"] == pytest.approx(0.5) and r["proportional"] and r["orientation_flips"] == 0
    LY = catalog_lengths(holonomy_from_fn(fixtures()["length"]), cat3)
    r = proportionality_check(LX, LY, G3)
    assert not r["proportional"] and r["orientation_flips"] > 0


def test_length_preservation(fx, cat3):
    h = holonomy_from_fn(fx["base"])
    out = length_preservation_check(h, cat3, induced_map(cat3, DELTA))
    assert out["max_deviation"] < 1e-9 and out["checked"] == len(cat3)
    hL = holonomy_from_fn(fx["length"])
    with pytest.raises(NotAutomorphism) as err:
        length_preservation_check(hL, cat3, induced_map(cat3, DELTA))
    assert err.value.to_dict()


def test_witness(fx, cat3):
    hX, hY = holonomy_from_fn(fx["base"]), holonomy_from_fn(fx["length"])
    rep = rigidity_witness(hX, hY, cat3, budget=40)
    assert rep.j + rep.k <= 80
    assert rep.orientation_X != rep.orientation_Y
    assert replay_witness(rep, hX, hY, cat3)
    # frozen from the search on the shipped fixtures
    assert (rep.j, rep.k) == (12, 14)

import json
import math

import pytest

from curvegraph.catalog import (Catalog, certify_simple, default_seeds, enumerate_curves,
                                stability_horizon, sublevel_set)
from curvegraph.errors import BudgetExceeded, PreconditionError
from curvegraph.mapping_class import humphries_curves
from curvegraph.words import canonical_class


def test_depth0_humphries(h_base):
    cat = enumerate_curves(h_base, 0, humphries_curves(2))
    assert len(cat) == 5
    assert [e.curve for e in cat.entries] == humphries_curves(2)
    assert not any(e.separating for e in cat.entries)


def test_default_seeds_include_separating(h_base):
    seeds = default_seeds(2)
    assert len(seeds) == 6
    cat = enumerate_curves(h_base, 0)
    comm = cat.id_of(canonical_class((1, 2, -1, -2), 2))
    assert comm is not None and cat.entries[comm].separating
    assert cat.entries[comm].homology == (0, 0, 0, 0)


@pytest.mark.parametrize("depth,count", [(0, 6), (1, 16), (2, 54)])
def test_counts(h_base, depth, count):
    # frozen from the enumeration; the depth-3 count (200) is checked on the shared catalog
    assert len(enumerate_curves(h_base, depth)) == count


def test_depth3(cat3):
    assert len(cat3) == 200
    assert certify_simple(cat3) == []
    assert len({e.curve for e in cat3.entries}) == 200


def test_lengths_positive_and_match_seeds(cat3):
    for e in cat3.entries:
        assert e.length > 0
    for c in humphries_curves(2)[0::2]:
        assert cat3.entries[cat3.id_of(c)].length == pytest.approx(2.0, abs=1e-12)


def test_provenance_reproduces_entry(cat3):
    from curvegraph.mapping_class import apply
    for e in cat3.entries[::7]:
        assert apply(e.provenance, cat3.seeds[e.seed]) == e.curve


def test_non_simple_seed_rejected(h_base):
    with pytest.raises(PreconditionError):
        enumerate_curves(h_base, 0, [canonical_class((1, 1, 2, 2), 2)])


def test_budget(h_base):
    with pytest.raises(BudgetExceeded):
        enumerate_curves(h_base, 3, cap=50)


def test_sublevel_sets_nested(cat3):
    prev = []
    for r in (2.0, 4.1, 6.0, 8.0, 10.0):
        cur = sublevel_set(cat3, r)
        assert set(prev) <= set(cur)
        assert all(cat3.entries[i].length <= r for i in cur)
        prev = cur
    assert len(sublevel_set(cat3, 2.0)) == 3


def test_horizon_sublevel_stable(h_base, cat3):
    r = cat3.stability_horizon
    assert 0 < r < math.inf
    cat4 = enumerate_curves(h_base, 4)
    below3 = {cat3.entries[i].curve for i in sublevel_set(cat3, r)}
    below4 = {cat4.entries[i].curve for i in sublevel_set(cat4, r)}
    assert below3 == below4


def test_json_deterministic_and_roundtrip(h_base, cat3):
    a = json.dumps(cat3.to_json(), sort_keys=True)
    b = json.dumps(cat3.to_json(), sort_keys=True)
    assert a == b
    back = Catalog.from_json(json.loads(a))
    assert [e.curve for e in back.entries] == [e.curve for e in cat3.entries]
    assert back.intersection(3, 17) == cat3.intersection(3, 17)
    assert json.dumps(back.to_json(), sort_keys=True) == a

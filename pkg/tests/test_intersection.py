import random

import pytest

from curvegraph.hyperbolic import FNCoordinates, holonomy_from_fn
from curvegraph.intersection import dirichlet_domain, geometric_intersection, self_intersection
from curvegraph.mapping_class import MappingClassWord, apply, humphries_curves, twist_power
from curvegraph.words import canonical_class

OTHER = FNCoordinates(2, (1.3, 3.1, 0.8), (0.7, -1.2, 0.4))


def i(h, x, y):
    r = geometric_intersection(h, x, y)
    assert r.certified
    return r.count


@pytest.mark.parametrize("g", [2, 3])
def test_chain_pattern(g):
    if g == 2:
        h = holonomy_from_fn(FNCoordinates(2, (2, 2, 2), (0, 0, 0)))
    else:
        h = holonomy_from_fn(FNCoordinates(3, (2,) * 6, (0,) * 6))
    chain = humphries_curves(g)
    for j, x in enumerate(chain):
        for k, y in enumerate(chain):
            if j != k:
                assert i(h, x, y) == (1 if abs(j - k) == 1 else 0)


def test_twist_identity(h_base):
    c2 = humphries_curves(2)[1]
    for k in range(-8, 9):
        if k == 0:
            continue
        assert i(h_base, twist_power(1, k, c2), c2) == abs(k)


@pytest.mark.parametrize("k", [-3, -2, -1, 1, 2, 3])
def test_twist_about_c2(h_base, k):
    c1, c2, c3 = humphries_curves(2)[:3]
    assert i(h_base, twist_power(2, k, c1), c1) == abs(k)
    assert i(h_base, twist_power(2, k, c1), c3) == abs(k)


def test_ratio_towards_twist_curve(h_base):
    c1, c2, c3 = humphries_curves(2)[:3]
    for k in (10, 12):
        n = i(h_base, twist_power(2, k, c1), c3)
        assert abs(n / k - i(h_base, c2, c1) * i(h_base, c2, c3)) <= 1


def test_self_intersection_examples(h_base):
    assert self_intersection(h_base, canonical_class((1, 1, 2, 2), 2)).count == 1
    assert self_intersection(h_base, canonical_class((1, 1, 1, 2, 2, 2), 2)).count == 4
    assert self_intersection(h_base, canonical_class((1, 2, 1), 2)).count == 0
    for c in humphries_curves(2):
        assert self_intersection(h_base, c).count == 0
    mc = MappingClassWord(2, (1, -3, 2, 5))
    assert self_intersection(h_base, apply(mc, humphries_curves(2)[0])).count == 0


def test_self_pair_is_twice_self_intersection(h_base):
    c = canonical_class((1, 1, 2, 2), 2)
    assert geometric_intersection(h_base, c, c).count == 2


def test_symmetric(h_base, cat3):
    rng = random.Random(3)
    for _ in range(20):
        u, v = rng.sample(range(len(cat3)), 2)
        x, y = cat3.entries[u].curve, cat3.entries[v].curve
        assert i(h_base, x, y) == i(h_base, y, x)


def test_metric_independence(cat3):
    h2 = holonomy_from_fn(OTHER)
    rng = random.Random(11)
    for _ in range(30):
        u, v = rng.sample(range(len(cat3)), 2)
        cnt, cert = cat3.intersection(u, v)
        assert cert
        assert i(h2, cat3.entries[u].curve, cat3.entries[v].curve) == cnt


def test_homeomorphism_invariance(h_base, cat3):
    rng = random.Random(5)
    for _ in range(25):
        u, v = rng.sample(range(60), 2)
        x, y = cat3.entries[u].curve, cat3.entries[v].curve
        mc = MappingClassWord(2, tuple(rng.choice([1, -1]) * rng.randint(1, 5)
                                       for _ in range(rng.randint(1, 6))))
        assert i(h_base, apply(mc, x), apply(mc, y)) == cat3.intersection(u, v)[0]


@pytest.mark.parametrize("g", [2, 3, 4])
def test_dirichlet_area(g):
    fn = FNCoordinates(g, (2.0,) * (3 * g - 3), (0.0,) * (3 * g - 3))
    D = dirichlet_domain(holonomy_from_fn(fn))
    import math
    assert D.area == pytest.approx(4 * math.pi * (g - 1), rel=1e-6)

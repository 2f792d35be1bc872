"""Finite windows of the curve complex: mapping-class orbits of seed curves.

A catalog is the breadth-first closure of a seed list under the signed chain
twists, cut off at a depth. Every entry remembers how it was reached (seed
index and twist word), which is what lets later constructions twist along an
entry via a conjugated chain twist.
"""

import math
from dataclasses import dataclass, field

from . import linalg2 as la
from .errors import BudgetExceeded, FingerprintContradiction, PreconditionError
from .hyperbolic import FNCoordinates, exact_generators, holonomy_from_fn, length_from_trace
from .intersection import engine_for, self_intersection
from .mapping_class import MappingClassWord, humphries_curves, twist_automorphism
from .words import a, b, canonical_class, curve_from_json, homology_vector

ENTRY_CAP = 5000
LENGTH_BITS = 192
FINGERPRINT_TOL = 1e-9


def default_seeds(g):
    """Chain curves plus the commutator [a_k, b_k] cutting off each handle."""
    seeds = list(humphries_curves(g))
    for k in range(1, g + 1):
        c = canonical_class((a(k), b(k), -a(k), -b(k)), g)
        if c not in seeds:
            seeds.append(c)
    return seeds


class LengthOracle:
    """Hyperbolic lengths from the extended-precision generators of a holonomy.

    Catalog lengths feed strict comparisons, so they are computed well past
    binary64 and only rounded at the end; equal lengths stay equal.
    """

    def __init__(self, h, bits=LENGTH_BITS):
        self.bk, self.gens = exact_generators(h, bits)
        self.one = tuple(self.bk.num(x) for x in la.IDENTITY)

    def trace(self, w):
        m = self.one
        for x in w:
            m = la.mul(m, self.gens[x])
        return la.tr(m)

    def __call__(self, w):
        w = w.word if hasattr(w, "word") else tuple(w)
        return float(length_from_trace(self.trace(w), self.bk))


def _fingerprint_key(v):
    return min(tuple(v), tuple(-x for x in v))


@dataclass
class Entry:
    id: int
    curve: object
    length: float
    homology: tuple
    separating: bool
    seed: int
    twists: tuple = ()

    @property
    def provenance(self):
        """The mapping class f with curve = f(seed)."""
        return MappingClassWord(self.curve.genus, self.twists)

    def to_json(self):
        return {"id": self.id, "word": list(self.curve.word), "length": self.length,
                "homology": list(self.homology), "separating": self.separating}


@dataclass
class Catalog:
    genus: int
    fn: FNCoordinates
    depth: int
    seeds: list
    entries: list
    stability_horizon: float = math.inf
    _pairs: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.index = {e.curve: e.id for e in self.entries}

    @property
    def holonomy(self):
        return holonomy_from_fn(self.fn)

    def __len__(self):
        return len(self.entries)

    def id_of(self, c):
        return self.index.get(c)

    def lengths(self):
        return {e.id: e.length for e in self.entries}

    def row(self, i):
        """Fill and return i(entry i, entry j) for all j (one walk along entry i)."""
        n = len(self.entries)
        missing = [j for j in range(n) if (min(i, j), max(i, j)) not in self._pairs]
        if missing:
            eng = engine_for(self.holonomy)
            counts = eng.crossings_many(self.entries[i].curve,
                                        [self.entries[j].curve for j in missing])
            for j, cnt in zip(missing, counts):
                if j == i:
                    cnt //= 2
                self._pairs[(min(i, j), max(i, j))] = (int(cnt), bool(eng.certified))
        return [self._pairs[(min(i, j), max(i, j))] for j in range(n)]

    def intersection(self, i, j):
        """(count, certified) for the pair, computed on first use."""
        key = (min(i, j), max(i, j))
        if key not in self._pairs:
            self.row(i)
        return self._pairs[key]

    def disjoint(self, i, j):
        cnt, cert = self.intersection(i, j)
        return cert and cnt == 0

    def fill(self):
        for i in range(len(self.entries)):
            self.row(i)

    def to_json(self):
        inter = [[i, j, c, cert] for (i, j), (c, cert) in sorted(self._pairs.items()) if i != j]
        return {
            "genus": self.genus,
            "fn": self.fn.to_json(),
            "depth": self.depth,
            "seeds": [list(s.word) for s in self.seeds],
            "entries": [e.to_json() for e in self.entries],
            "intersections": inter,
            "stability_horizon": self.stability_horizon,
        }

    @classmethod
    def from_json(cls, data):
        g = int(data["genus"])
        fn = FNCoordinates.from_json(g, data["fn"])
        seeds = [curve_from_json(s, g) for s in data["seeds"]]
        # provenance is not serialized; rebuild it deterministically
        cat = enumerate_curves(holonomy_from_fn(fn), int(data["depth"]), seeds)
        words = [tuple(e["word"]) for e in data["entries"]]
        if [e.curve.word for e in cat.entries] != words:
            raise PreconditionError("catalog file does not match its own enumeration")
        for i, j, c, cert in data.get("intersections", []):
            cat._pairs[(min(i, j), max(i, j))] = (int(c), bool(cert))
        return cat


def enumerate_curves(h, depth, seeds=None, cap=ENTRY_CAP):
    """Orbit of ``seeds`` under chain-twist words of length <= ``depth``."""
    g = h.genus
    if not isinstance(depth, int) or depth < 0:
        raise PreconditionError("depth must be a nonnegative integer")
    seeds = default_seeds(g) if seeds is None else [canonical_class(s.word, g) for s in seeds]
    length = LengthOracle(h)
    gens = [s * i for i in range(1, 2 * g + 2) for s in (1, -1)]
    entries, index = [], {}

    def add(c, seed, twists, raw):
        if c in index:
            e = entries[index[c]]
            hv = homology_vector(raw, g)
            if _fingerprint_key(hv) != _fingerprint_key(e.homology) or \
                    abs(length(raw) - e.length) > FINGERPRINT_TOL * max(1.0, e.length):
                raise FingerprintContradiction(f"word {raw} collides with entry {e.id} but differs numerically")
            return None
        if len(entries) >= cap:
            raise BudgetExceeded(f"catalog would exceed {cap} entries")
        hv = c.homology
        e = Entry(len(entries), c, length(c), hv, not any(hv), seed, twists)
        entries.append(e)
        index[c] = e.id
        return e

    frontier = []
    for k, s in enumerate(seeds):
        if self_intersection(h, s).count != 0:
            raise PreconditionError(f"seed {list(s.word)} is not simple")
        e = add(s, k, (), s.word)
        if e is not None:
            frontier.append(e)
    for _ in range(depth):
        nxt = []
        for e in frontier:
            for i in gens:
                raw = twist_automorphism(g, i)(e.curve.word)
                e2 = add(canonical_class(raw, g), e.seed, (i,) + e.twists, raw)
                if e2 is not None:
                    nxt.append(e2)
        frontier = nxt
    cat = Catalog(g, h.fn, depth, seeds, entries)
    cat.stability_horizon = stability_horizon(cat, gens)
    return cat


def stability_horizon(cat, gens=None):
    """Largest entry length r such that every twist of every entry of length <= r is cataloged."""
    g = cat.genus
    gens = gens or [s * i for i in range(1, 2 * g + 2) for s in (1, -1)]
    escape = math.inf
    for e in cat.entries:
        if e.length >= escape:
            continue
        for i in gens:
            if canonical_class(twist_automorphism(g, i)(e.curve.word), g) not in cat.index:
                escape = e.length
                break
    if escape == math.inf:
        return math.inf
    below = [e.length for e in cat.entries if e.length < escape]
    return max(below) if below else 0.0


def certify_simple(cat):
    """Self-intersection of every entry; returns ids that fail (empty when all are simple)."""
    bad = []
    for e in cat.entries:
        cnt, cert = cat.intersection(e.id, e.id)
        if cnt != 0 or not cert:
            bad.append(e.id)
    return bad


def sublevel_set(cat, r):
    """Ids with length <= r, sorted by (length, id)."""
    return [e.id for e in sorted(cat.entries, key=lambda e: (e.length, e.id)) if e.length <= r]

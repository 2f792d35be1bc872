"""Dehn twists along the chain curves, acting on the surface group.

Chain curves, indices 1..2g+1::

    c_1 = a_1,  c_2k = b_k,  c_2k+1 = p_k = b_k a_k^-1 b_k^-1 a_k+1,  c_2g+1 = a_g

Consecutive chain curves meet once and the others are disjoint. The twist
tables are built from three patterns (twist along an a-curve, along a
b-curve, along a p-curve) and each one is checked when it is built: the
relator must map to a cyclic rotation of itself in the free group, the
inverse table must undo it, and the twisted curve must be fixed.

Sign convention: generator +i is the twist realized on holonomy by adding
the length of c_i to its Fenchel-Nielsen twist (odd i); the even generators
are then fixed by the braid relations T_i T_i+1 T_i = T_i+1 T_i T_i+1.
For g >= 3 the chain twists generate the hyperelliptic subgroup only.
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import ConstructionFailure, PreconditionError
from .words import (a, b, canonical_class, check_genus, cyclic_reduce, free_reduce,
                    homology_vector, inverse, min_rotation, relator)


def _check_index(g, i):
    if not isinstance(i, int) or isinstance(i, bool) or not 1 <= abs(i) <= 2 * g + 1:
        raise PreconditionError(f"chain index {i!r} out of range for genus {g}")
    return i


@lru_cache(maxsize=None)
def chain_word(g, i):
    """Group word of the chain curve c_i."""
    check_genus(g)
    _check_index(g, i)
    if i == 1:
        return (a(1),)
    if i == 2 * g + 1:
        return (a(g),)
    if i % 2 == 0:
        return (b(i // 2),)
    k = (i - 1) // 2
    return (b(k), -a(k), -b(k), a(k + 1))


def humphries_curve(g, index):
    return canonical_class(chain_word(g, index), g)


def humphries_curves(g):
    return [humphries_curve(g, i) for i in range(1, 2 * g + 2)]


class Automorphism:
    """Endomorphism of the free group on a_1..b_g given by generator images."""

    def __init__(self, genus, images):
        self.genus = genus
        self.images = {}
        for x, w in images.items():
            self.images[x] = tuple(w)
            self.images[-x] = inverse(tuple(w))

    def __call__(self, w):
        out = []
        for x in w:
            out.extend(self.images[x])
        return free_reduce(out)

    def table(self):
        return {x: self.images[x] for x in range(1, 2 * self.genus + 1)}

    def __repr__(self):
        return f"Automorphism(genus={self.genus}, {self.table()})"


def _pattern(g, k, kind, s):
    t = {x: (x,) for x in range(1, 2 * g + 1)}
    if kind == "a":
        t[b(k)] = (b(k), -s * a(k))
    elif kind == "b":
        t[a(k)] = (a(k), s * b(k))
    else:
        p = (b(k), -a(k), -b(k), a(k + 1))
        if s < 0:
            p = inverse(p)
        t[b(k)] = free_reduce(p + (b(k),))
        t[a(k + 1)] = free_reduce(p + (a(k + 1),) + inverse(p))
        t[b(k + 1)] = free_reduce((b(k + 1),) + inverse(p))
    return t


def _raw_table(g, i):
    s = 1 if i > 0 else -1
    i = abs(i)
    if i == 1:
        return _pattern(g, 1, "a", s)
    if i == 2 * g + 1:
        return _pattern(g, g, "a", s)
    if i % 2 == 0:
        return _pattern(g, i // 2, "b", s)
    return _pattern(g, (i - 1) // 2, "p", s)


def check_automorphism(phi, g):
    """Relator goes to a free-group conjugate of itself; raises ConstructionFailure."""
    r = relator(g)
    img = cyclic_reduce(phi(r))
    if min_rotation(img) != min_rotation(r):
        raise ConstructionFailure(f"relator maps to {img}, not a conjugate of the relator")


@lru_cache(maxsize=None)
def twist_automorphism(g, index):
    """Generator-image table of the twist along c_|index| (inverse twist if negative)."""
    check_genus(g)
    _check_index(g, index)
    phi = Automorphism(g, _raw_table(g, index))
    back = Automorphism(g, _raw_table(g, -index))
    check_automorphism(phi, g)
    for x in range(1, 2 * g + 1):
        if back(phi((x,))) != (x,):
            raise ConstructionFailure(f"twist {index} is not inverted by twist {-index}")
    c = chain_word(g, abs(index))
    if canonical_class(phi(c), g) != canonical_class(c, g):
        raise ConstructionFailure(f"twist {index} moves its own curve")
    return phi


@dataclass(frozen=True)
class MappingClassWord:
    """Composition T_i1 o T_i2 o ... of chain twists; the rightmost acts first."""

    genus: int
    twists: tuple = ()

    def __post_init__(self):
        check_genus(self.genus)
        object.__setattr__(self, "twists", tuple(self.twists))
        for i in self.twists:
            _check_index(self.genus, i)

    def inverse(self):
        return MappingClassWord(self.genus, tuple(-i for i in reversed(self.twists)))

    def __mul__(self, other):
        if other.genus != self.genus:
            raise PreconditionError("genus mismatch")
        return MappingClassWord(self.genus, self.twists + other.twists)

    def power(self, n):
        base = self if n >= 0 else self.inverse()
        return MappingClassWord(self.genus, base.twists * abs(n))

    def __len__(self):
        return len(self.twists)

    def to_json(self):
        return list(self.twists)

    @classmethod
    def from_json(cls, genus, data):
        return cls(genus, tuple(int(x) for x in data))


def _word_of(c):
    return c.word if hasattr(c, "word") else tuple(c)


def apply(mc, c):
    """Image of the curve class ``c`` under the mapping class ``mc``."""
    g = mc.genus
    if c.genus != g:
        raise PreconditionError("genus mismatch")
    w = c.word
    for i in reversed(mc.twists):
        w = canonical_class(twist_automorphism(g, i)(w), g).word
    return canonical_class(w, g)


def apply_word(mc, w):
    """Image of a group word (no conjugacy normalization)."""
    for i in reversed(mc.twists):
        w = twist_automorphism(mc.genus, i)(w)
    return w


@dataclass(frozen=True)
class TwistTarget:
    """The curve f(c_base) for the mapping class f = ``conjugator``."""

    base: int
    conjugator: MappingClassWord

    def __post_init__(self):
        if not isinstance(self.base, int) or not 1 <= self.base <= 2 * self.conjugator.genus + 1:
            raise PreconditionError(f"base {self.base!r} out of range")

    @property
    def genus(self):
        return self.conjugator.genus

    @property
    def curve(self):
        return apply(self.conjugator, humphries_curve(self.genus, self.base))

    def mapping_class(self, n=1):
        """f o T_base^n o f^-1 as a word."""
        g = self.genus
        tw = MappingClassWord(g, (self.base if n >= 0 else -self.base,) * abs(n))
        return self.conjugator * tw * self.conjugator.inverse()

    def to_json(self):
        return {"base": self.base, "conj": self.conjugator.to_json()}

    @classmethod
    def from_json(cls, genus, data):
        return cls(int(data["base"]), MappingClassWord.from_json(genus, data.get("conj", [])))


def twist_target(g, index, conj=()):
    return TwistTarget(index, MappingClassWord(g, tuple(conj)))


def twist_power(t, n, c):
    """T_t^n applied to ``c``, computed as f o T^n o f^-1 with f the conjugator."""
    if isinstance(t, int):
        t = twist_target(c.genus, t)
    if n == 0:
        return c
    f = t.conjugator
    x = apply(f.inverse(), c)
    step = MappingClassWord(t.genus, (t.base if n > 0 else -t.base,))
    for _ in range(abs(n)):
        x = apply(step, x)
    return apply(f, x)


def homology_matrix(mc):
    """Integer matrix M with homology(mc(c)) = M @ homology(c), as nested lists."""
    g = mc.genus
    cols = [homology_vector(apply_word(mc, (x,)), g) for x in range(1, 2 * g + 1)]
    return [[cols[j][i] for j in range(2 * g)] for i in range(2 * g)]


def act_on_homology(mc, v):
    m = homology_matrix(mc)
    return tuple(sum(r[j] * v[j] for j in range(len(v))) for r in m)

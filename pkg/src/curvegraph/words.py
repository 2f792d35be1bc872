"""Word algebra for the closed surface group of genus g.

Generators are numbered ``1..2g`` as a1, b1, a2, b2, ... and inverses are
negated indices, so ``[1, 2, -1, -2]`` is the commutator a1 b1 a1^-1 b1^-1.
The defining relator is the product of the handle commutators.

Conjugacy classes are normalized by cyclic free reduction, cyclic Dehn
reduction (replace any piece longer than half of a relator rotation by the
shorter complementary piece), then closure under half-relator swaps. The
canonical word is the lexicographic minimum over the closure, all cyclic
rotations and inversion.
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetExceeded, PreconditionError, TrivialClass

CLOSURE_CAP = 20000


def check_genus(g):
    if not isinstance(g, int) or isinstance(g, bool) or g < 2:
        raise PreconditionError(f"genus must be an integer >= 2, got {g!r}")
    return g


def a(k):
    return 2 * k - 1


def b(k):
    return 2 * k


def inverse(w):
    return tuple(-x for x in reversed(w))


def free_reduce(w):
    out = []
    for x in w:
        if x == 0:
            raise PreconditionError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w):
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def check_letters(w, g):
    for x in w:
        if not isinstance(x, int) or x == 0 or abs(x) > 2 * g:
            raise PreconditionError(f"letter {x!r} out of range for genus {g}")
    return tuple(w)


@lru_cache(maxsize=None)
def relator(g):
    r = []
    for k in range(1, g + 1):
        r += [a(k), b(k), -a(k), -b(k)]
    return tuple(r)


@lru_cache(maxsize=None)
def _rotations_by_letter(g):
    """Map each letter to the two relator rotations (of r and r^-1) starting with it."""
    r = relator(g)
    table = {}
    for rr in (r, inverse(r)):
        for i in range(len(rr)):
            rot = rr[i:] + rr[:i]
            table.setdefault(rot[0], []).append(rot)
    return table


def _rotate(w, i):
    return w[i:] + w[:i]


def _longest_match(w, i, rot):
    n, m = len(w), len(rot)
    lim = min(n, m)
    k = 0
    while k < lim and w[(i + k) % n] == rot[k]:
        k += 1
    return k


def _dehn_step_cyclic(w, g):
    """One cyclic Dehn reduction, or None when no piece exceeds half a relator."""
    half = 2 * g
    table = _rotations_by_letter(g)
    for i, x in enumerate(w):
        for rot in table[x]:
            k = _longest_match(w, i, rot)
            if k > half:
                rest = _rotate(w, i)[k:]
                return cyclic_reduce(inverse(rot[k:]) + rest)
    return None


def dehn_reduce_cyclic(w, g):
    w = cyclic_reduce(w)
    while w:
        nxt = _dehn_step_cyclic(w, g)
        if nxt is None:
            break
        w = nxt
    return w


def dehn_reduce(w, g):
    """Linear (non-cyclic) Dehn algorithm; returns a reduced word for the same element."""
    half = 2 * g
    table = _rotations_by_letter(g)
    w = free_reduce(w)
    changed = True
    while changed and w:
        changed = False
        n = len(w)
        for i in range(n):
            for rot in table[w[i]]:
                k = 0
                while k < len(rot) and i + k < n and w[i + k] == rot[k]:
                    k += 1
                if k > half:
                    w = free_reduce(w[:i] + inverse(rot[k:]) + w[i + k:])
                    changed = True
                    break
            if changed:
                break
    return w


def is_identity(w, g):
    return len(dehn_reduce(tuple(w), g)) == 0


def _half_swaps(w, g):
    half = 2 * g
    table = _rotations_by_letter(g)
    n = len(w)
    for i, x in enumerate(w):
        for rot in table[x]:
            if _longest_match(w, i, rot) == half and n >= half:
                rest = _rotate(w, i)[half:]
                yield cyclic_reduce(inverse(rot[half:]) + rest)


def min_rotation(w):
    if not w:
        return w
    return min(_rotate(w, i) for i in range(len(w)))


def _closure(w, g):
    """All Dehn-reduced cyclic words reachable by half swaps (restarting on shortening)."""
    while True:
        start = min_rotation(w)
        seen = {start}
        stack = [start]
        shorter = None
        while stack and shorter is None:
            cur = stack.pop()
            for nxt in _half_swaps(cur, g):
                if len(nxt) < len(cur) or _dehn_step_cyclic(nxt, g) is not None:
                    shorter = dehn_reduce_cyclic(nxt, g)
                    break
                key = min_rotation(nxt)
                if key not in seen:
                    seen.add(key)
                    stack.append(key)
                    if len(seen) > CLOSURE_CAP:
                        raise BudgetExceeded("half-relator closure exceeded cap")
        if shorter is None:
            return seen
        if not shorter:
            return set()
        w = shorter


def canonical_word(w, g):
    w = dehn_reduce_cyclic(tuple(w), g)
    if not w:
        raise TrivialClass("word represents the identity")
    closure = _closure(w, g)
    if not closure:
        raise TrivialClass("word represents the identity")
    return min(min(c, min_rotation(inverse(c))) for c in closure)


def homology_vector(w, g):
    v = [0] * (2 * g)
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


@dataclass(frozen=True, order=True)
class CurveClass:
    """Unoriented conjugacy class in the genus-g surface group.

    Only build these through :func:`canonical_class`; the word is assumed
    canonical and equality is plain word equality.
    """

    genus: int
    word: tuple

    @property
    def homology(self):
        return homology_vector(self.word, self.genus)

    def __len__(self):
        return len(self.word)

    def to_json(self):
        return list(self.word)


@lru_cache(maxsize=200000)
def _canonical_cached(w, g):
    return canonical_word(w, g)


def canonical_class(w, g):
    check_genus(g)
    w = check_letters(tuple(w), g)
    return CurveClass(g, _canonical_cached(free_reduce(w), g))


def homology_class(c):
    """Exponent-sum vector; zero for null-homologous classes."""
    return homology_vector(c.word, c.genus)


def curve_from_json(data, g):
    return canonical_class([int(x) for x in data], g)

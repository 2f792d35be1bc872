"""Desk-scale runs of the arguments about graphs induced by length functions.

* quasi-homothetic convergence of L(T_a^n b) / f(n),
* the rigidity witness: two surfaces whose length orders disagree on a pair
  of disjoint twisted curves xi_j = T_a^j xi, eta_k = T_b^k eta,
* proportionality of two length assignments over disjoint pairs,
* a lower bound for the Thurston distance,
* length preservation by automorphisms of the graph.
"""

import csv
import io
import math
import statistics
from dataclasses import dataclass, field

from .catalog import LengthOracle
from .errors import (BudgetExhausted, NoCrossRatioGap, NotAutomorphism, PrecisionOverflow,
                     PreconditionError, TangencyAmbiguity, Uncertified)
from .graph import _twist_target, build_graph, is_automorphism
from .hyperbolic import FNCoordinates, evaluate, holonomy_from_fn, length_from_trace
from .intersection import geometric_intersection
from . import linalg2 as la
from .mapping_class import TwistTarget, apply_word, twist_target
from .words import canonical_class, cyclic_reduce

CROSS_TOL = 1e-9


def fixtures():
    """The shipped genus-2 FN points."""
    return {
        "base": FNCoordinates(2, (2.0, 2.0, 2.0), (0.0, 0.0, 0.0)),
        "length": FNCoordinates(2, (2.2, 2.0, 2.0), (0.0, 0.0, 0.0)),
        "twist": FNCoordinates(2, (2.0, 2.0, 2.0), (0.5, 0.0, 0.0)),
        "scaled": FNCoordinates(2, (2.2, 2.2, 2.2), (0.0, 0.0, 0.0)),
    }


def fmt(x):
    """12 significant digits; infinity as the string inf."""
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    return buf.getvalue()


def catalog_lengths(h, cat):
    length = LengthOracle(h)
    return {e.id: length(e.curve) for e in cat.entries}


# -- quasi-homothetic convergence -------------------------------------------

@dataclass(frozen=True)
class QHType:
    """Type (f, A): f is "identity" or a table of values f(1), f(2), ...; A is i(a, b)."""

    f: object = "identity"
    A: str = "intersection"

    def __post_init__(self):
        if self.f != "identity":
            vals = tuple(float(x) for x in self.f)
            if not vals or any(x <= 0 for x in vals):
                raise PreconditionError("f must take positive values")
            object.__setattr__(self, "f", vals)
        if self.A != "intersection":
            raise PreconditionError("only A = intersection number is built in")

    def __call__(self, n):
        if self.f == "identity":
            return float(n)
        if n > len(self.f):
            raise PreconditionError(f"f is tabulated only up to n = {len(self.f)}")
        return self.f[n - 1]

    def grows(self, n_max):
        """f(n) -> infinity, checked as: the tail maximum exceeds the head maximum."""
        vals = [self(n) for n in range(1, n_max + 1)]
        half = len(vals) // 2
        return max(vals[half:]) > max(vals[:half] or [0.0])


@dataclass
class ConvergenceTable:
    rows: list
    limit: float
    intersection: int
    sup_residual: float
    relative_error: float
    fitted_C: float

    def to_csv(self):
        return _csv(["n", "length", "ratio", "residual"], self.rows)


def _length(h, w, bits):
    if bits is None:
        return float(length_from_trace(la.tr(evaluate(h, w))))
    return LengthOracle(h, bits)(w)


def qh_convergence(h, target, beta, n_max, qh=None, bits=None):
    """Table of (n, L(T^n beta), L/f(n), L - n i(a, b) L(a)) for n = 1..n_max.

    ``bits`` switches to extended-precision lengths; in binary64 the run
    stops with PrecisionOverflow once the matrix entries leave range.
    """
    qh = qh or QHType()
    g = beta.genus
    if isinstance(target, int):
        target = twist_target(g, target)
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    alpha = target.curve
    res = geometric_intersection(h, alpha, beta)
    if res.count == 0:
        raise PreconditionError("twist curve is disjoint from beta; the sequence is constant")
    la_ = _length(h, alpha.word, bits)
    phi = target.mapping_class(1)
    w = beta.word
    rows = []
    for n in range(1, n_max + 1):
        w = cyclic_reduce(apply_word(phi, w))
        L = _length(h, w, bits)
        rows.append((n, L, L / qh(n), L - n * res.count * la_))
    limit = res.count * la_
    sup = max(abs(r[3]) for r in rows)
    rel = abs(rows[-1][2] - limit) / limit
    fitted = max(abs(r[3]) for r in rows if r[0] >= min(5, n_max))
    return ConvergenceTable(rows, limit, res.count, sup, rel, fitted)


# -- rigidity witness --------------------------------------------------------

@dataclass
class WitnessReport:
    alpha: list
    beta: list
    xi: list
    eta: list
    j: int
    k: int
    xi_j: list = field(default_factory=list)
    eta_k: list = field(default_factory=list)
    lengths_X: tuple = ()
    lengths_Y: tuple = ()
    orientation_X: str = ""
    orientation_Y: str = ""
    disjointness: str = "certified"
    ids: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "alpha": self.alpha, "beta": self.beta, "xi": self.xi, "eta": self.eta,
            "j": self.j, "k": self.k, "xi_j": self.xi_j, "eta_k": self.eta_k,
            "lengths_X": list(self.lengths_X), "lengths_Y": list(self.lengths_Y),
            "orientation_X": self.orientation_X, "orientation_Y": self.orientation_Y,
            "disjointness": self.disjointness, "ids": self.ids,
        }


def _orient(lx, ly):
    if lx < ly:
        return "xi->eta"
    if lx > ly:
        return "eta->xi"
    return "tie"


def _gap_pairs(cat, LX, LY, tol):
    out = []
    n = len(cat)
    for u in range(n):
        for v in range(u + 1, n):
            if not cat.disjoint(u, v):
                continue
            gap = abs(LX[u] * LY[v] - LY[u] * LX[v]) / (LY[u] * LY[v])
            if gap > tol:
                out.append((u, v, gap))
    return out


def _squares(cat, u, v):
    """(xi, eta) with i(u,xi) > 0, i(v,xi) = 0, i(v,eta) > 0, i(u,eta) = 0, i(xi,eta) = 0."""
    n = len(cat)
    xis = [x for x in range(n) if cat.intersection(u, x)[0] > 0 and cat.disjoint(v, x)]
    etas = [y for y in range(n) if cat.intersection(v, y)[0] > 0 and cat.disjoint(u, y)]
    for x in xis:
        for y in etas:
            if cat.disjoint(x, y):
                yield x, y


class _Twisted:
    """Words and lengths of T^n c under two surfaces, grown on demand."""

    def __init__(self, target, c, lx, ly):
        self.phi = target.mapping_class(1)
        self.words = [c.word]
        self.lx, self.ly = lx, ly
        self.cache = {}

    def word(self, n):
        while len(self.words) <= n:
            self.words.append(cyclic_reduce(apply_word(self.phi, self.words[-1])))
        return self.words[n]

    def lengths(self, n):
        if n not in self.cache:
            w = self.word(n)
            self.cache[n] = (self.lx(w), self.ly(w))
        return self.cache[n]


def _disjoint_twisted(h, x, y):
    """Certified disjointness of the twisted pair, or None when the engine cannot decide."""
    try:
        res = geometric_intersection(h, x, y)
    except (Uncertified, TangencyAmbiguity, PrecisionOverflow):
        return None
    if not res.certified:
        return None
    return res.count == 0


def rigidity_witness(hX, hY, cat, budget=40, tol=CROSS_TOL):
    """Search for disjoint xi_j, eta_k ordered oppositely by the two length functions.

    (j, k) runs over diagonals j + k = 2, 3, ... with 1 <= j, k <= budget.
    """
    LX = catalog_lengths(hX, cat)
    LY = catalog_lengths(hY, cat)
    pairs = _gap_pairs(cat, LX, LY, tol)
    if not pairs:
        raise NoCrossRatioGap("all certified disjoint pairs have equal cross products")
    pairs.sort(key=lambda p: (-p[2], max(LX[p[0]], LX[p[1]]), p[0], p[1]))
    lx, ly = LengthOracle(hX), LengthOracle(hY)
    best = None
    for u, v, gap in pairs:
        tu = _twist_target(cat, cat.entries[u])
        tv = _twist_target(cat, cat.entries[v])
        if tu is None or tv is None:
            continue
        sq = next(_squares(cat, u, v), None)
        if sq is None:
            continue
        x, y = sq
        xi = _Twisted(tu, cat.entries[x].curve, lx, ly)
        eta = _Twisted(tv, cat.entries[y].curve, lx, ly)
        for s in range(2, 2 * budget + 1):
            for j in range(max(1, s - budget), min(budget, s - 1) + 1):
                k = s - j
                (xX, xY), (eX, eY) = xi.lengths(j), eta.lengths(k)
                oX, oY = _orient(xX, eX), _orient(xY, eY)
                margin = min(abs(xX - eX), abs(xY - eY))
                if best is None or margin > best[0] and oX != oY:
                    best = (margin, u, v, j, k)
                if oX == "tie" or oY == "tie" or oX == oY:
                    continue
                g = cat.genus
                cj = canonical_class(xi.word(j), g)
                ck = canonical_class(eta.word(k), g)
                d = _disjoint_twisted(hX, cj, ck)
                if d is False:
                    continue
                report = WitnessReport(
                    list(cat.entries[u].curve.word), list(cat.entries[v].curve.word),
                    list(cat.entries[x].curve.word), list(cat.entries[y].curve.word), j, k,
                    list(cj.word), list(ck.word), (xX, eX), (xY, eY), oX, oY,
                    "certified" if d else "structural",
                    {"alpha": u, "beta": v, "xi": x, "eta": y})
                replay_witness(report, hX, hY, cat)
                return report
        break
    raise BudgetExhausted(f"no opposite orientation with j, k <= {budget}",
                          {"best": best, "pairs_tried": len(pairs)})


def replay_witness(report, hX, hY, cat):
    """Recompute the witness from scratch; raises PreconditionError if it does not hold."""
    g = cat.genus
    ids = report.ids
    tu = _twist_target(cat, cat.entries[ids["alpha"]])
    tv = _twist_target(cat, cat.entries[ids["beta"]])
    xi = canonical_class(report.xi, g)
    eta = canonical_class(report.eta, g)
    w1, w2 = xi.word, eta.word
    for _ in range(report.j):
        w1 = apply_word(tu.mapping_class(1), w1)
    for _ in range(report.k):
        w2 = apply_word(tv.mapping_class(1), w2)
    cj, ck = canonical_class(w1, g), canonical_class(w2, g)
    if list(cj.word) != report.xi_j or list(ck.word) != report.eta_k:
        raise PreconditionError("replayed twisted curves differ from the report")
    lx, ly = LengthOracle(hX), LengthOracle(hY)
    oX = _orient(lx(cj), lx(ck))
    oY = _orient(ly(cj), ly(ck))
    if oX != report.orientation_X or oY != report.orientation_Y or oX == oY:
        raise PreconditionError("replayed orientations do not match")
    # the square: alpha-beta, alpha-eta, beta-xi, xi-eta disjoint; alpha-xi, beta-eta meet
    a, b, x, y = ids["alpha"], ids["beta"], ids["xi"], ids["eta"]
    ok = (cat.disjoint(a, b) and cat.disjoint(a, y) and cat.disjoint(b, x) and cat.disjoint(x, y)
          and cat.intersection(a, x)[0] > 0 and cat.intersection(b, y)[0] > 0)
    if not ok:
        raise PreconditionError("the four curves do not form the required square")
    if report.disjointness == "certified" and _disjoint_twisted(hX, cj, ck) is not True:
        raise PreconditionError("certified disjointness of xi_j, eta_k did not replay")
    return True


# -- proportionality and Thurston distance ----------------------------------

def proportionality_check(LX, LY, G, tol=CROSS_TOL):
    """Cross-product deviation over the disjoint pairs of G, and the median ratio k."""
    cat = G.catalog
    n = len(cat)
    worst, worst_pair, count = 0.0, None, 0
    flips = []
    for u in range(n):
        for v in range(u + 1, n):
            if not cat.disjoint(u, v):
                continue
            count += 1
            dev = abs(LX[u] * LY[v] - LY[u] * LX[v]) / (LY[u] * LY[v])
            if dev > worst:
                worst, worst_pair = dev, (u, v)
            sx = (LX[u] > LX[v]) - (LX[u] < LX[v])
            sy = (LY[u] > LY[v]) - (LY[u] < LY[v])
            if sx != sy:
                flips.append((u, v))
    k = statistics.median(LX[i] / LY[i] for i in range(n))
    return {"k": k, "max_deviation": worst, "worst_pair": worst_pair, "pairs": count,
            "proportional": worst <= tol, "orientation_flips": len(flips),
            "first_flip": flips[0] if flips else None}


def thurston_lower(hX, hY, cat):
    """ln max L_Y/L_X over the catalog (forward) and ln max L_X/L_Y (reverse)."""
    LX = catalog_lengths(hX, cat)
    LY = LX if hY is hX else catalog_lengths(hY, cat)
    fwd = max(cat.lengths(), key=lambda i: (LY[i] / LX[i], -i))
    rev = max(cat.lengths(), key=lambda i: (LX[i] / LY[i], -i))
    return {"forward": (math.log(LY[fwd] / LX[fwd]), fwd),
            "reverse": (math.log(LX[rev] / LY[rev]), rev)}


def thurston_csv(result):
    rows = [("forward",) + result["forward"], ("reverse",) + result["reverse"]]
    return _csv(["direction", "value", "argmax_curve_id"], rows)


def length_preservation_check(h, cat, phi):
    """max |L(a) - L(phi a)| for a graph automorphism ``phi`` of G_L, L = lengths on h."""
    L = catalog_lengths(h, cat)
    G = build_graph(cat, L)
    ok, violation = is_automorphism(G, phi)
    if not ok:
        raise NotAutomorphism("map does not preserve the oriented graph", violation)
    dev = max((abs(L[u] - L[v]) for u, v in phi.items()), default=0.0)
    return {"max_deviation": dev, "checked": len(phi)}

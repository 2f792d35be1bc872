"""Fuchsian holonomy from Fenchel-Nielsen coordinates, and hyperbolic lengths.

The surface is cut along the curves a_1..a_g into a planar surface whose
boundary loops, in cyclic order, are

    u_k = a_k,    v_k = b_k a_k^-1 b_k^-1        (product u_1 v_1 ... u_g v_g = 1).

The planar surface is cut further by p_k = v_k u_{k+1} (the odd chain curves)
and, for g >= 4, by the partial products q_j = p_1 ... p_j. Each pair of pants
is realized by two hyperbolic matrices with prescribed traces, pants are
glued along shared boundaries with the seams aligned at zero twist, and the
b_k are recovered as the HNN stable letters across the a_k.

Pants-curve order (the index of an FN coordinate): the odd chain curves
c_1 = a_1, c_3 = p_1, ..., c_{2g-1} = p_{g-1}, c_{2g+1} = a_g, followed by
a_2..a_{g-1}, p_g (g >= 3) and q_2..q_{g-2} (g >= 4).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from . import linalg2 as la
from .errors import (ConstructionFailure, NotHyperbolic, PrecisionOverflow,
                     PreconditionError)
from .words import a, b, canonical_class, check_genus, free_reduce, inverse, relator

EPS_PARABOLIC = 1e-8
RELATOR_TOL = 1e-9
DET_TOL = 1e-12
ENTRY_CAP = 1e300


@dataclass(frozen=True)
class FNCoordinates:
    genus: int
    lengths: tuple
    twists: tuple

    def __post_init__(self):
        check_genus(self.genus)
        n = 3 * self.genus - 3
        object.__setattr__(self, "lengths", tuple(float(x) for x in self.lengths))
        object.__setattr__(self, "twists", tuple(float(x) for x in self.twists))
        if len(self.lengths) != n or len(self.twists) != n:
            raise PreconditionError(f"genus {self.genus} needs {n} lengths and {n} twists")
        if not all(x > 0 for x in self.lengths):
            raise ConstructionFailure("pants-curve lengths must be positive")

    def to_json(self):
        return {"lengths": list(self.lengths), "twists": list(self.twists)}

    @classmethod
    def from_json(cls, genus, data):
        return cls(genus, tuple(data["lengths"]), tuple(data["twists"]))


# -- combinatorics of the decomposition ------------------------------------

def _u(k, g):
    k = (k - 1) % g + 1
    return (a(k),)


def _v(k, g):
    k = (k - 1) % g + 1
    return (b(k), -a(k), -b(k))


def _p(k, g):
    return _v(k, g) + _u(k + 1, g)


def _q(j, g):
    w = ()
    for k in range(1, j + 1):
        w += _p(k, g)
    return free_reduce(w)


@lru_cache(maxsize=None)
def pants_curve_names(g):
    names = ["a1"] + [f"p{k}" for k in range(1, g)] + [f"a{g}"]
    names += [f"a{k}" for k in range(2, g)]
    if g >= 3:
        names.append(f"p{g}")
    names += [f"q{j}" for j in range(2, g - 1)]
    return tuple(names)


def curve_word(name, g):
    kind, k = name[0], int(name[1:])
    if kind == "a":
        return _u(k, g)
    if kind == "p":
        return _p(k, g)
    return _q(k, g)


@lru_cache(maxsize=None)
def pants_curve_words(g):
    """Group words of the pants curves, in FN-coordinate order."""
    return tuple(curve_word(n, g) for n in pants_curve_names(g))


def pants_curves(g):
    return [canonical_class(w, g) for w in pants_curve_words(g)]


@lru_cache(maxsize=None)
def _decomposition(g):
    """Pants as lists of (slot word, curve name); slot words multiply to 1."""
    pants = []
    for k in range(1, g + 1):
        third = "p1" if (g == 2 and k == 2) else f"p{k}"
        pants.append([(_v(k, g), f"a{k}"), (_u(k + 1, g), f"a{k % g + 1}"),
                      (inverse(_p(k, g)), third)])
    if g == 3:
        pants.append([(_p(1, g), "p1"), (_p(2, g), "p2"), (_p(3, g), "p3")])
    elif g >= 4:
        pants.append([(_p(1, g), "p1"), (_p(2, g), "p2"), (inverse(_q(2, g)), "q2")])
        for j in range(2, g - 2):
            pants.append([(_q(j, g), f"q{j}"), (_p(j + 1, g), f"p{j + 1}"),
                          (inverse(_q(j + 1, g)), f"q{j + 1}")])
        pants.append([(_q(g - 2, g), f"q{g - 2}"), (_p(g - 1, g), f"p{g - 1}"),
                      (_p(g, g), f"p{g}")])
    return pants


def _solve_signs(g):
    """Trace signs per pants curve so each pants has sign product -1 (GF(2) solve)."""
    names = list(pants_curve_names(g))
    idx = {n: i for i, n in enumerate(names)}
    rows = []
    for pant in _decomposition(g):
        row = [0] * (len(names) + 1)
        for _, n in pant:
            row[idx[n]] ^= 1
        row[-1] = 1
        rows.append(row)
    ncols = len(names)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [x ^ y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] and not any(row[:-1]) for row in rows):
        raise ConstructionFailure("no consistent SL(2,R) lift of the pants signs")
    x = [0] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return {n: (-1 if x[idx[n]] else 1) for n in names}


# -- geometry ----------------------------------------------------------------

def _pants_matrices(l1, l2, l3, signs, bk):
    """Matrices X, Y, Z with XYZ = 1 for a pair of pants with boundary lengths l_i."""
    ha, hb, hc = l1 / 2, l2 / 2, l3 / 2
    cosh_d = (bk.cosh(hc) + bk.cosh(ha) * bk.cosh(hb)) / (bk.sinh(ha) * bk.sinh(hb))
    d = bk.acosh(cosh_d)
    r = bk.sqrt(bk.num(2)) / 2
    k = (r, r, -r, r)
    u = la.conj(k, la.translation(d, bk))
    x = la.diag(bk.exp(ha), bk.exp(-ha))
    target = -2 * bk.cosh(hc)
    best = None
    for eps in (1, -1):
        y = la.conj(u, la.diag(bk.exp(eps * hb), bk.exp(-eps * hb)))
        err = abs(la.tr(la.mul(x, y)) - target)
        if best is None or err < best[0]:
            best = (err, y)
    y = best[1]
    s1, s2, s3 = signs
    if s1 * s2 * s3 != -1:
        raise ConstructionFailure("pants sign product must be -1")
    x = x if s1 > 0 else la.neg(x)
    y = y if s2 > 0 else la.neg(y)
    z = la.inv(la.mul(x, y))
    return [x, y, z]


def _seam_frame(m, partner, bk):
    """Eigen-frame of ``m`` with F(i) at the foot of the perpendicular from ``partner``'s axis."""
    f, _, _ = la.hyperbolic_frame(m, bk)
    fi = la.inv(f)
    rep, att = la.fixed_points_h(partner, bk)
    r1 = la.act_h(fi, rep)
    r2 = la.act_h(fi, att)
    prod = (r1[0] / r1[1]) * (r2[0] / r2[1])
    if not prod > 0:
        raise ConstructionFailure("pants boundary axes are not disjoint")
    kk = bk.sqrt(prod)
    s = bk.sqrt(kk)
    return la.scale_cols(f, s, 1 / s)


@dataclass(frozen=True, eq=False)
class Holonomy:
    """Generator matrices in SL(2,R), keyed by signed letter.

    ``relator_residual`` is measured on the guard-precision construction
    (``reference``); ``working_residual`` on the rounded working matrices.
    """

    genus: int
    fn: FNCoordinates
    matrices: dict
    relator_residual: float
    backend: la.Backend
    reference: dict = None
    working_residual: float = float("nan")
    balance: tuple = ()

    def generator(self, letter):
        return self.matrices[letter]

    def __repr__(self):
        return f"Holonomy(genus={self.genus}, fn={self.fn}, residual={self.relator_residual:.2e})"


@lru_cache(maxsize=256)
def _holonomy_cached(fn, bits):
    # construct with guard bits, then round to the working precision
    work = la.Backend((bits or 53) + 64)
    return _build(fn, work, la.Backend(bits))


def holonomy_from_fn(fn, bits=None):
    """Build the holonomy of a marked hyperbolic surface from FN data.

    ``bits`` selects mpmath arithmetic with that many mantissa bits.
    """
    if not isinstance(fn, FNCoordinates):
        raise PreconditionError("expected FNCoordinates")
    return _holonomy_cached(fn, bits)


def _build(fn, bk, out):
    g = fn.genus
    mats = _raw_generators(fn, bk)
    ref, params = _balance(mats, g, bk)
    for k in list(ref):
        ref[-k] = la.inv(ref[k])
    one = (bk.num(1), bk.num(0), bk.num(0), bk.num(1))
    det_err, res = _residuals(ref, g, one)
    if det_err > DET_TOL:
        raise ConstructionFailure(f"generator determinant off by {det_err:.3e}")
    mats = {}
    for k in range(1, 2 * g + 1):
        m = tuple(out.num(x) for x in ref[k])
        mats[k] = tuple(x / out.sqrt(la.det(m)) for x in m)
        mats[-k] = la.inv(mats[k])
    if not res <= RELATOR_TOL:
        raise ConstructionFailure(f"relator residual {res:.3e} exceeds {RELATOR_TOL}")
    r = _product(mats, relator(g), la.diag(out.num(1), out.num(1)))
    one_out = la.diag(out.num(1), out.num(1))
    working = float(min(la.max_abs_diff(r, one_out), la.max_abs_diff(r, la.neg(one_out))))
    hol = Holonomy(g, fn, mats, res, out, ref, working, params)
    for w in pants_curve_words(g):
        if not abs(la.tr(_product(mats, w))) > 2:
            raise ConstructionFailure("pants curve is not hyperbolic")
    return hol


def _raw_generators(fn, bk):
    """Unbalanced generator matrices a_k, b_k computed in the backend ``bk``."""
    g = fn.genus
    names = pants_curve_names(g)
    length = {n: bk.num(x) for n, x in zip(names, fn.lengths)}
    twist = {n: bk.num(x) for n, x in zip(names, fn.twists)}
    signs = _solve_signs(g)
    pants = _decomposition(g)

    raw = []
    for pant in pants:
        ls = [length[n] for _, n in pant]
        ss = [signs[n] for _, n in pant]
        raw.append(_pants_matrices(*ls, ss, bk))

    # glue along planar curves, breadth first from pants 0
    occurrences = {}
    for pi, pant in enumerate(pants):
        for si, (_, n) in enumerate(pant):
            if n[0] != "a":
                occurrences.setdefault(n, []).append((pi, si))
    placed = {0: raw[0]}
    queue = [0]
    while queue:
        cur = queue.pop(0)
        for n, occ in occurrences.items():
            (p1, s1), (p2, s2) = occ
            if cur not in (p1, p2):
                continue
            if cur == p2:
                (p1, s1), (p2, s2) = (p2, s2), (p1, s1)
            if p2 in placed:
                continue
            old, new = placed[p1], raw[p2]
            f_old = _seam_frame(old[s1], old[(s1 + 1) % 3], bk)
            f_new = _seam_frame(new[s2], new[(s2 + 1) % 3], bk)
            h = la.mul(la.mul(f_old, la.W), la.mul(la.translation(-twist[n], bk), la.inv(f_new)))
            placed[p2] = [la.conj(h, m) for m in new]
            queue.append(p2)
    if len(placed) != len(pants):
        raise ConstructionFailure("planar pants graph is disconnected")

    mats = {}
    for k in range(1, g + 1):
        name = f"a{k}"
        # u_k sits in the pants of p_{k-1}, slot 1; v_k in the pants of p_k, slot 0
        pu, pv = (k - 2) % g, k - 1
        mu, mu_partner = placed[pu][1], placed[pu][2]
        mv, mv_partner = placed[pv][0], placed[pv][1]
        fu = _seam_frame(mu, mu_partner, bk)
        fv = _seam_frame(mv, mv_partner, bk)
        stable = la.mul(la.mul(fv, la.translation(twist[name], bk)), la.mul(la.inv(la.W), la.inv(fu)))
        mats[a(k)] = mu
        mats[b(k)] = stable
        check = la.conj(stable, la.inv(mu))
        if la.max_abs_diff(check, mv) > 1e-6 * max(1.0, max(abs(x) for x in mv)):
            raise ConstructionFailure(f"HNN gluing failed across {name}")
    return mats


def _residuals(mats, g, one):
    det_err = max(float(abs(la.det(mats[k]) - 1)) for k in range(1, 2 * g + 1))
    r = _product(mats, relator(g), one)
    res = min(la.max_abs_diff(r, one), la.max_abs_diff(r, la.neg(one)))
    return det_err, float(res)


def _balance(mats, g, bk):
    """Conjugate so that i minimizes the total generator displacement.

    Keeps matrix entries small, which is what binary64 evaluation needs.
    """
    gens = [mats[k] for k in range(1, 2 * g + 1)]
    params = []
    for _ in range(2):
        fl = [np.array([float(x) for x in m]) for m in gens]

        def cost(p):
            x, t = p
            y = np.exp(t)
            tot = 0.0
            for a_, b_, c_, d_ in fl:
                # squared Frobenius norm of A^-1 M A, A: i -> x + iy
                aa = a_ - c_ * x
                bb = (b_ + (a_ - d_) * x - c_ * x * x) / y
                cc = c_ * y
                dd = d_ + c_ * x
                tot += aa * aa + bb * bb + cc * cc + dd * dd
            return np.log(tot)

        res = minimize(cost, [0.0, 0.0], method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        params.append((float(res.x[0]), float(res.x[1])))
        gens = _conj_params(gens, params[-1:], bk)
    return {k + 1: m for k, m in enumerate(gens)}, tuple(params)


def _conj_params(gens, params, bk):
    for x, t in params:
        x = bk.num(x)
        sy = bk.sqrt(bk.exp(bk.num(t)))
        amat = (sy, x / sy, 0 * x, 1 / sy)
        gens = [la.conj(la.inv(amat), m) for m in gens]
    return gens


@lru_cache(maxsize=64)
def _exact_cached(fn, params, bits):
    bk = la.Backend(bits)
    raw = _raw_generators(fn, bk)
    gens = _conj_params([raw[k] for k in range(1, 2 * fn.genus + 1)], params, bk)
    out = {}
    for k, m in enumerate(gens, start=1):
        out[k] = m
        out[-k] = la.inv(m)
    return bk, out


def exact_generators(h, bits):
    """The same representation as ``h`` computed with ``bits`` of mantissa.

    Uses the balancing conjugation stored in ``h``, so the result agrees
    with ``h.matrices`` up to rounding.
    """
    return _exact_cached(h.fn, h.balance, int(bits))


def _product(mats, w, one=la.IDENTITY):
    m = one
    for x in w:
        m = la.mul(m, mats[x])
    return m


def evaluate(h, w):
    """Matrix image of a word; raises PrecisionOverflow past the binary64 entry cap."""
    m = la.IDENTITY
    if h.backend.extended:
        m = tuple(h.backend.num(x) for x in m)
    for x in w:
        m = la.mul(m, h.matrices[x])
        if not h.backend.extended and max(abs(e) for e in m) > ENTRY_CAP:
            raise PrecisionOverflow("matrix entries exceed binary64 cap; use extended precision")
    return m


def length_from_trace(t, bk=la.FLOAT):
    t = abs(t)
    if not t > 2 + EPS_PARABOLIC:
        raise NotHyperbolic(f"|trace| = {float(t)!r} is not hyperbolic")
    return 2 * bk.acosh(t / 2)


def trace_of(h, c):
    w = c.word if hasattr(c, "word") else tuple(c)
    return la.tr(evaluate(h, w))


def hyperbolic_length(h, c):
    """Length of the closed geodesic in the class ``c`` (a CurveClass or a word)."""
    w = c.word if hasattr(c, "word") else tuple(c)
    if not w:
        raise NotHyperbolic("trivial word")
    val = length_from_trace(la.tr(evaluate(h, w)), h.backend)
    return val if h.backend.extended else float(val)

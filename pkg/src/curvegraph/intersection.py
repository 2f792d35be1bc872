"""Geometric intersection numbers from axis crossings in the hyperbolic plane.

Every class is realized by the axis of its holonomy image. i(x, y) is the
number of lifts of axis(y) that cross one fundamental period of axis(x).

The lifts are found with a Dirichlet domain D centered at i. D is built from
finitely many orbit points by half-plane clipping in the Klein model and is
accepted only when its hyperbolic area equals 4 pi (g - 1); a smaller
candidate set can only give a larger polygon, so the area check certifies
that D is exact. With rho the circumradius of D:

* a period of axis(y) is walked through the tiling, giving the tiles it
  visits; translating those lifts by the orbit ball of radius R + rho
  yields every lift of axis(y) within R = rho + margin of i;
* a period of axis(x) is walked the same way; a crossing inside tile gD is
  a crossing with a lift g L, L one of the lifts near i.

Crossings are located in the frame where axis(x) is the imaginary axis:
a geodesic with endpoints e1 e2 < 0 crosses it at height sqrt(-e1 e2).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg2 as la
from .errors import TangencyAmbiguity, Uncertified
from .hyperbolic import evaluate, exact_generators
from .words import free_reduce, inverse, is_identity

AREA_TOL = 1e-6
MARGIN = 0.5
LINK_TOL = 1e-10
END_TOL = 1e-7
DEPTH_CAP = 16
WALK_CAP = 200000
STEP = 1e-8
# crossings sharper than this (|log ratio of endpoints|) are recomputed in extended precision
SHAPE_FLOAT = 10.0
# a crossing angle below LINK_TOL radians is treated as a tangency
SHAPE_TANGENT = 2 * math.log(2 / LINK_TOL)

_J = np.array([1.0, -1.0, -1.0])


@dataclass(frozen=True)
class IntersectionResult:
    count: int
    certified: bool
    radius_used: float

    def to_json(self):
        return {"count": self.count, "certified": self.certified,
                "radius_used": self.radius_used}


# -- hyperboloid helpers -------------------------------------------------------

def _so21(m):
    """3x3 action on hyperboloid coordinates induced by an SL(2,R) matrix."""
    a, b, c, d = (float(x) for x in m)
    pqr = np.array([[a * a, 2 * a * b, b * b],
                    [a * c, a * d + b * c, b * d],
                    [c * c, 2 * c * d, d * d]])
    to = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, -1.0, 0.0]])
    back = np.array([[0.5, 0.0, 0.5], [0.5, 0.0, -0.5], [0.0, 1.0, 0.0]])
    return back @ pqr @ to


def _orbit_point(m):
    a, b, c, d = (float(x) for x in m)
    p, r, q = a * a + b * b, c * c + d * d, a * c + b * d
    return np.array([(p + r) / 2, (p - r) / 2, q])


def _mink(x, y):
    return x[..., 0] * y[..., 0] - x[..., 1] * y[..., 1] - x[..., 2] * y[..., 2]


def _null(u, w):
    return np.stack([(u * u + w * w) / 2, (u * u - w * w) / 2, u * w], axis=-1)


def _as_tuple(m):
    return (float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))


def _inv_np(m):
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


# -- Dirichlet domain ----------------------------------------------------------

class DirichletDomain:
    """Dirichlet polygon at i with its face-pairing elements."""

    def __init__(self, genus, faces, words, vertices, area, rho):
        self.genus = genus
        self.faces = faces              # list of 2x2 numpy SL2 matrices
        self.words = words              # the same elements as group words
        self.vectors = np.array([_orbit_point(_as_tuple(f)) - np.array([1.0, 0, 0])
                                 for f in faces])
        self.face_so = [_so21(_as_tuple(f)) for f in faces]
        self.face_inv_so = [np.linalg.inv(s) for s in self.face_so]
        self.vertices = vertices
        self.area = area
        self.rho = rho

    def reduce(self, x, cap=10000):
        """Move hyperboloid point ``x`` into D.

        Returns (local point, face indices k1, k2, ...) with
        x = f_k1 f_k2 ... (local point).
        """
        path = []
        for _ in range(cap):
            vals = _mink(self.vectors, x)
            k = int(np.argmin(vals))
            if vals[k] >= -1e-12 * max(1.0, x[0]):
                return x, path
            x = self.face_inv_so[k] @ x
            path.append(k)
        raise Uncertified("point reduction did not terminate")


def _clip(poly, labels, v, lab):
    """Clip a convex Klein polygon by v0 - v1 k1 - v2 k2 >= 0."""
    def val(p):
        return v[0] - v[1] * p[0] - v[2] * p[1]

    out, out_lab = [], []
    n = len(poly)
    vals = [val(p) for p in poly]
    if min(vals) >= 0:
        return poly, labels, False
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp, fq = vals[i], vals[(i + 1) % n]
        if fp >= 0:
            out.append(p)
            out_lab.append(labels[i])
        if (fp >= 0) != (fq >= 0):
            t = fp / (fp - fq)
            x = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            out.append(x)
            out_lab.append(labels[i] if fp < 0 else lab)
    # fix labels: edge i runs from out[i] to out[i+1]
    return out, out_lab, True


def _polygon(cands):
    poly = [(-2.0, -2.0), (2.0, -2.0), (2.0, 2.0), (-2.0, 2.0)]
    labels = [None] * 4
    origin = np.array([1.0, 0, 0])
    for idx, m in cands:
        v = _orbit_point(m) - origin
        poly, labels, _ = _clip(poly, labels, v, idx)
        if not poly:
            break
    return poly, labels


def _area(poly):
    """Hyperbolic area of a compact convex Klein polygon containing the origin.

    Sum over the fan of triangles (origin, p_i, p_i+1), each from
    tan(A/2) = |det(u, v, w)| / (1 + <u,v> + <v,w> + <w,u>); unlike the angle
    sum this stays accurate when several vertices nearly coincide.
    """
    pts = [np.array([1.0, x, y]) / math.sqrt(1 - x * x - y * y) for x, y in poly]
    o = np.array([1.0, 0.0, 0.0])
    total = 0.0
    for i in range(len(pts)):
        v, w = pts[i], pts[(i + 1) % len(pts)]
        det = abs(np.linalg.det(np.array([o, v, w])))
        total += 2 * math.atan2(det, 1 + _mink(o, v) + _mink(v, w) + _mink(w, o))
    return total, pts


def _key(p):
    return (round(p[1], 4), round(p[2], 4))


def _dedupe(cands):
    """Drop candidates whose orbit point repeats an earlier one (same element, other word)."""
    out, pts = [], []
    for m, w in cands:
        q = _orbit_point(m)
        if any(_mink(q, r) < 1 + 1e-6 for r in pts[-64:]):
            continue
        pts.append(q)
        out.append((m, w))
    return out


def _grow(pool, steps, bound, g, depth=4):
    """Add products of ``steps`` (up to ``depth`` factors) with cosh-displacement <= bound."""
    origin = _key(np.array([1.0, 0, 0]))
    frontier = [(la.IDENTITY, ())]
    seen = set()
    for _ in range(depth):
        nxt = []
        for m0, w0 in frontier:
            for m1, w1 in steps:
                mm = la.mul(m0, m1)
                op = _orbit_point(mm)
                if op[0] > bound:
                    continue
                k = _key(op)
                if k == origin or k in seen:
                    continue
                seen.add(k)
                w = free_reduce(w0 + w1)
                if k not in pool:
                    # products that are the identity in the group only look nontrivial by rounding
                    if not w or is_identity(w, g):
                        continue
                    pool[k] = (mm, w)
                nxt.append((mm, w))
        frontier = nxt


def dirichlet_domain(h, rounds=12, bits=160):
    """Certified Dirichlet domain of ``h`` at i (raises Uncertified).

    Candidate elements are grown as short products of the current faces;
    every face is recomputed from its word in extended precision before it is
    reused, so rounding in long products cannot leave near-duplicate bisectors.
    """
    g = h.genus
    bk, ex = exact_generators(h, bits)
    one = (bk.num(1), bk.num(0), bk.num(0), bk.num(1))

    def accurate(w):
        m = one
        for x in w:
            m = la.mul(m, ex[x])
        return tuple(float(x) for x in m)

    pool = {}
    gens = [(accurate((x,)), (x,)) for x in range(-2 * g, 2 * g + 1) if x]
    _grow(pool, gens, math.inf, g, depth=2)
    target = 4 * math.pi * (g - 1)
    for _ in range(rounds):
        cands = sorted(pool.values(), key=lambda mw: (_orbit_point(mw[0])[0], len(mw[1]), mw[1]))
        cands = _dedupe(cands)
        poly, labels = _polygon([(i, m) for i, (m, _) in enumerate(cands)])
        if not poly:
            break
        compact = None not in labels and all(x * x + y * y < 1 - 1e-12 for x, y in poly)
        faces = [(accurate(cands[lab][1]), cands[lab][1]) for lab in labels if lab is not None]
        for m, w in faces:
            pool[_key(_orbit_point(m))] = (m, w)
        if compact:
            area, pts = _area(poly)
            rho = max(math.acosh(max(1.0, p[0])) for p in pts)
            if abs(area - target) < AREA_TOL:
                return DirichletDomain(g, [np.array([[m[0], m[1]], [m[2], m[3]]]) for m, _ in faces],
                                       [w for _, w in faces], pts, area, rho)
            # faces of the true domain come from orbit points within 2 rho
            bound = math.cosh(2 * rho + 0.5)
        else:
            bound = math.cosh(12.0)
        uniq = {_key(_orbit_point(m)): (m, w) for m, w in faces}
        steps = list(uniq.values()) + [(la.inv(m), inverse(w)) for m, w in uniq.values()]
        _grow(pool, steps, bound, g, depth=4 if len(steps) < 70 else 3)
    raise Uncertified("Dirichlet domain did not close up (area check failed)")


# -- the engine ----------------------------------------------------------------

class IntersectionEngine:
    """Per-holonomy cache of the Dirichlet domain, orbit ball and lift sets."""

    def __init__(self, h, depth_cap=DEPTH_CAP, margin=MARGIN):
        self.h = h
        self.depth_cap = depth_cap
        self.domain = dirichlet_domain(h)
        self.R = self.domain.rho + margin
        self.certified = True
        self._ball = None
        self._lifts = {}
        self._axes = {}
        self._walks = {}
        self._walks_hp = {}
        self._ball_paths = None
        self._ball_hp = {}
        self._src = {}
        self._hp = {}

    # orbit ball of tiles whose centers lie within R + 2 rho of i
    def ball(self):
        if self._ball is not None:
            return self._ball
        rho = self.domain.rho
        bound = math.cosh(self.R + 2 * rho)
        keep = math.cosh(self.R + rho)
        eye = np.eye(2)
        seen = {_key(np.array([1.0, 0, 0]))}
        frontier = [(eye, ())]
        found = [eye]
        paths = [()]
        depth = 0
        while frontier:
            depth += 1
            if depth > self.depth_cap:
                self.certified = False
                break
            nxt = []
            for m, path in frontier:
                for fi, f in enumerate(self.domain.faces):
                    mm = m @ f
                    p = _orbit_point(_as_tuple(mm))
                    if p[0] > bound:
                        continue
                    k = _key(p)
                    if k in seen:
                        continue
                    seen.add(k)
                    nxt.append((mm, path + (fi,)))
                    if p[0] <= keep:
                        found.append(mm)
                        paths.append(path + (fi,))
            frontier = nxt
        self._ball = np.array(found)
        self._ball_paths = paths
        return self._ball

    def _exact(self, bits):
        """Generators and face pairings with ``bits`` of mantissa."""
        if bits not in self._hp:
            bk, gens = exact_generators(self.h, bits)
            one = (bk.num(1), bk.num(0), bk.num(0), bk.num(1))
            faces = []
            for w in self.domain.words:
                m = one
                for x in w:
                    m = la.mul(m, gens[x])
                faces.append(m)
            self._hp[bits] = (bk, gens, faces, [la.inv(f) for f in faces])
        return self._hp[bits]

    def axis(self, c):
        """Exact frame of axis(c) at the foot of the perpendicular from i, and the length."""
        w = _word(c)
        if w in self._axes:
            return self._axes[w]
        bits = 128
        while True:
            bk, gens, _, _ = self._exact(bits)
            m = (bk.num(1), bk.num(0), bk.num(0), bk.num(1))
            for x in w:
                m = la.mul(m, gens[x])
            f, _, half = la.hyperbolic_frame(m, bk)
            ell = float(2 * half)
            # frames drift like e^t along the walk; keep 4 spare bits per unit length
            need = 128 + 32 * math.ceil(4 * (ell + 2 * self.domain.rho) / 32)
            if need <= bits:
                break
            bits = need
        z = la.act(tuple(complex(x) for x in la.inv(f)), 1j)
        foot = bk.num(math.log(abs(z)))
        frame = la.mul(f, la.diag(bk.exp(foot / 2), bk.exp(-foot / 2)))
        self._axes[w] = (frame, ell, bits)
        return self._axes[w]

    def walk(self, c, t0, t1):
        """Local frames along axis(c) for t in [t0, t1].

        Returns pairs (t_k, G_k): in the coordinates of the k-th tile met, the
        axis is G_k(i e^(t - t_k)) and G_k(i) lies in D. Geodesics diverge
        exponentially, so G_k is propagated in extended precision and only
        rounded for the returned float copy.
        """
        key = (_word(c), t0, t1)
        if key in self._walks:
            return self._walks[key]
        self._walks_hp[key] = hp = []
        frame, ell, bits = self.axis(c)
        bk, _, faces, faces_inv = self._exact(bits)
        dom = self.domain

        def dm(t):
            t = bk.num(t)
            return la.diag(bk.exp(t / 2), bk.exp(-t / 2))

        def settle(g):
            _, path = dom.reduce(_orbit_point(_as_tuple(_np(g))))
            for k in path:
                g = la.mul(faces_inv[k], g)
            return g

        g = settle(la.mul(frame, dm(t0)))
        t = t0
        out = [(t, _np(g))]
        hp.append(g)
        for _ in range(WALK_CAP):
            so = _so21(_as_tuple(out[-1][1]))
            al = _mink(dom.vectors, so[:, 0])
            be = _mink(dom.vectors, so[:, 1])
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = -al / be
                roots = np.where(np.abs(ratio) < 1, np.arctanh(np.clip(ratio, -1 + 1e-16, 1 - 1e-16)), np.inf)
                # leave through a face where its function changes from + to -
                deriv = al * np.sinh(roots) + be * np.cosh(roots)
            roots = np.where((roots > 1e-12) & (deriv < 0), roots, np.inf)
            k = int(np.argmin(roots))
            tau = float(roots[k])
            if not math.isfinite(tau):
                raise Uncertified("geodesic walk lost its tile")
            if t + tau >= t1:
                self._walks[key] = out
                return out
            step = tau + STEP
            g = settle(la.mul(la.mul(faces_inv[k], g), dm(step)))
            t += step
            out.append((t, _np(g)))
            hp.append(g)
        self.certified = False
        return out

    def lifts(self, c):
        """Endpoint pairs (2x2, columns homogeneous) of all lifts of axis(c) within R of i."""
        w = _word(c)
        if w in self._lifts:
            return self._lifts[w]
        _, ell, _ = self.axis(c)
        base = np.array([g for _, g in self.walk(c, 0.0, ell)])
        ball = self.ball()
        cand = np.einsum("bij,tjk->btik", ball, base).reshape(-1, 2, 2)
        n1 = _null(cand[:, 0, 0], cand[:, 1, 0])
        n2 = _null(cand[:, 0, 1], cand[:, 1, 1])
        nrm = np.cross(n1, n2) * _J
        sh = np.abs(nrm[:, 0]) / np.sqrt(-_mink(nrm, nrm))
        cand = cand[sh <= math.sinh(self.R)]
        ang = -2 * np.arctan2(cand[:, 1, :], cand[:, 0, :]) % (2 * math.pi)
        src = np.argwhere(sh <= math.sinh(self.R))[:, 0]
        _, idx = np.unique(np.round(ang, 8), axis=0, return_index=True)
        idx = np.sort(idx)
        out = cand[idx]
        # (ball index, walk index) of every kept lift, for exact recomputation
        self._src[w] = np.stack(np.divmod(src[idx], len(base)), axis=1)
        self._lifts[w] = out
        return out

    def _ball_exact(self, b, bits):
        key = (b, bits)
        if key not in self._ball_hp:
            bk, _, faces, _ = self._exact(bits)
            m = (bk.num(1), bk.num(0), bk.num(0), bk.num(1))
            for fi in self._ball_paths[b]:
                m = la.mul(m, faces[fi])
            self._ball_hp[key] = m
        return self._ball_hp[key]

    def _exact_crossings(self, x, y, lift_ids, t0, t1, same):
        """Crossings of the given lifts of axis(y) with axis(x) on [t0, t1), in extended precision."""
        _, ell_y, bits_y = self.axis(y)
        _, _, bits_x = self.axis(x)
        bits = max(bits_x, bits_y)
        bk = self._exact(bits)[0]
        self.walk(y, 0.0, ell_y)
        ywalk = self._walks_hp[(_word(y), 0.0, ell_y)]
        xkey = (_word(x), t0, t1)
        xs = [tk for tk, _ in self._walks[xkey]]
        xg = [tuple(bk.num(v) for v in g) for g in self._walks_hp[xkey]]
        src = self._src[_word(y)]
        tiny = bk.num(2) ** (-bits // 2)
        out = []
        for li in lift_ids:
            b, j = src[li]
            lift = la.mul(self._ball_exact(int(b), bits), tuple(bk.num(v) for v in ywalk[int(j)]))
            for tk, g in zip(xs, xg):
                e = la.mul(la.inv(g), lift)
                if e[2] == 0 or e[3] == 0:
                    continue
                e1, e2 = e[0] / e[2], e[1] / e[3]
                if same and (abs(e[0]) < tiny * abs(e[2]) or abs(e[2]) < tiny * abs(e[0])
                             or abs(e[1]) < tiny * abs(e[3]) or abs(e[3]) < tiny * abs(e[1])):
                    continue
                if e1 * e2 < 0:
                    sv = tk + float(bk.log(-e1 * e2)) / 2
                    shape = float(bk.log(max(e1, e2) / -min(e1, e2)))
                    out.append((sv, shape))
        return out

    def crossings(self, x, y):
        return self.crossings_many(x, [y])[0]

    def crossings_many(self, x, ys, offsets=(0.123456789, 0.3971, 0.6712, 0.9453)):
        """Crossing counts of lifts of each axis(y) with one period of axis(x).

        For y == x the axis of x itself is excluded.
        """
        _, ell, _ = self.axis(x)
        wx = _word(x)
        parts = [self.lifts(y) for y in ys]
        labels = np.concatenate([np.full(len(p), i) for i, p in enumerate(parts)]) if parts else np.zeros(0)
        same = np.array([_word(y) == wx for y in ys], dtype=bool)
        lifts = np.concatenate(parts) if parts else np.zeros((0, 2, 2))
        excl = same[labels.astype(int)] if len(lifts) else np.zeros(0, dtype=bool)
        for off in offsets:
            t0 = off * min(1.0, ell)
            found_s, found_shape, found_lab, found_idx = [], [], [], []
            for tk, g in self.walk(x, t0, t0 + ell):
                e = np.einsum("ij,njk->nik", _inv_np(g), lifts)
                u, wv = e[:, 0, :], e[:, 1, :]
                prod = u[:, 0] * wv[:, 0] * u[:, 1] * wv[:, 1]
                tiny = ((np.abs(u) < 1e-9 * np.abs(wv)) | (np.abs(wv) < 1e-9 * np.abs(u))).any(axis=1)
                sel = (prod < 0) & ~(tiny & excl)
                if not sel.any():
                    continue
                e1 = u[sel, 0] / wv[sel, 0]
                e2 = u[sel, 1] / wv[sel, 1]
                found_s.append(tk + 0.5 * np.log(-e1 * e2))
                found_shape.append(np.log(np.maximum(e1, e2) / -np.minimum(e1, e2)))
                found_lab.append(labels[sel])
                found_idx.append(np.nonzero(sel)[0])
            if not found_s:
                return [0] * len(ys)
            s = np.concatenate(found_s)
            shape = np.concatenate(found_shape)
            lab = np.concatenate(found_lab).astype(int)
            gidx = np.concatenate(found_idx)
            sharp = np.abs(shape) > SHAPE_FLOAT
            if sharp.any():
                # binary64 cannot place nearly tangent crossings; redo those lifts exactly
                starts = np.cumsum([0] + [len(p) for p in parts])
                extra_s, extra_shape, extra_lab = [], [], []
                for i in sorted(set(lab[sharp].tolist())):
                    ids = sorted(set((gidx[sharp & (lab == i)] - starts[i]).tolist()))
                    for sv, sh in self._exact_crossings(x, ys[i], ids, t0, t0 + ell, bool(same[i])):
                        extra_s.append(sv)
                        extra_shape.append(sh)
                        extra_lab.append(i)
                s = np.concatenate([s[~sharp], extra_s])
                shape = np.concatenate([shape[~sharp], extra_shape])
                lab = np.concatenate([lab[~sharp], np.array(extra_lab, dtype=int)])
            if np.any(np.abs(shape) > SHAPE_TANGENT):
                raise TangencyAmbiguity("crossing too close to tangency")
            if np.any(np.abs(s - t0) < END_TOL) or np.any(np.abs(s - t0 - ell) < END_TOL):
                continue
            keep = (s >= t0) & (s < t0 + ell)
            counts = []
            for i in range(len(ys)):
                m = keep & (lab == i)
                counts.append(_count_distinct(np.stack([s[m], shape[m]], axis=1)))
            return counts
        raise TangencyAmbiguity("crossings keep landing on the window ends")


def _word(c):
    return c.word if hasattr(c, "word") else tuple(c)


def _np(m):
    return np.array([[float(m[0]), float(m[1])], [float(m[2]), float(m[3])]])


def _count_distinct(pts, tol=1e-6):
    if len(pts) == 0:
        return 0
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    count = 0
    kept = []
    for s, sh in pts:
        dup = False
        for s2, sh2 in reversed(kept):
            if s - s2 > tol:
                break
            if abs(sh - sh2) < tol:
                dup = True
                break
        if not dup:
            kept.append((s, sh))
            count += 1
    return count


@lru_cache(maxsize=32)
def _engine(h, depth_cap):
    return IntersectionEngine(h, depth_cap)


def engine_for(h, depth_cap=None):
    """Shared engine per holonomy; ``depth_cap`` defaults to the module setting."""
    return _engine(h, depth_cap or DEPTH_CAP)


def _result(eng, count):
    return IntersectionResult(int(count), bool(eng.certified), float(eng.R))


def geometric_intersection(h, x, y, require_certified=False):
    """i(x, y) as the number of lifts of axis(y) crossing a period of axis(x).

    For x == y this counts ordered crossings, so i(x, x) = 2 * self-intersection.
    """
    eng = engine_for(h)
    n = eng.crossings(x, y)
    res = _result(eng, n)
    if require_certified and not res.certified:
        raise Uncertified("intersection count not certified", res)
    return res


def self_intersection(h, x, require_certified=False):
    eng = engine_for(h)
    n = eng.crossings(x, x)
    if n % 2:
        raise TangencyAmbiguity("odd self-crossing count")
    res = _result(eng, n // 2)
    if require_certified and not res.certified:
        raise Uncertified("self-intersection count not certified", res)
    return res


def is_simple(h, x):
    return self_intersection(h, x).count == 0


def intersection_row(h, x, ys):
    """Counts i(x, y) for every y in ``ys`` (one walk along axis(x))."""
    eng = engine_for(h)
    return eng.crossings_many(x, list(ys))

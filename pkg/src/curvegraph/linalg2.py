"""Tiny 2x2 matrix kernel over floats or mpmath numbers.

Matrices are tuples ``(a, b, c, d)`` for [[a, b], [c, d]]. Keeping them as
plain tuples lets the same code run in binary64 and in mpmath's arbitrary
precision.
"""

import math

import mpmath


class Backend:
    """Numeric context: binary64 (``bits=None``) or mpmath with ``bits`` of mantissa."""

    def __init__(self, bits=None):
        self.bits = bits
        if bits is None:
            self.cosh, self.sinh, self.exp = math.cosh, math.sinh, math.exp
            self.sqrt, self.log, self.acosh = math.sqrt, math.log, math.acosh
            self.cos, self.sin, self.pi = math.cos, math.sin, math.pi
            self.num = float
        else:
            self.ctx = mpmath.mp.clone()
            self.ctx.prec = bits
            c = self.ctx
            self.cosh, self.sinh, self.exp = c.cosh, c.sinh, c.exp
            self.sqrt, self.log, self.acosh = c.sqrt, c.log, c.acosh
            self.cos, self.sin, self.pi = c.cos, c.sin, c.pi
            self.num = c.mpf

    @property
    def extended(self):
        return self.bits is not None

    def __repr__(self):
        return "Backend(binary64)" if self.bits is None else f"Backend(bits={self.bits})"


FLOAT = Backend()

IDENTITY = (1.0, 0.0, 0.0, 1.0)


def mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def inv(m):
    a, b, c, d = m
    return (d, -b, -c, a)


def neg(m):
    return tuple(-x for x in m)


def tr(m):
    return m[0] + m[3]


def det(m):
    return m[0] * m[3] - m[1] * m[2]


def diag(x, y):
    return (x, 0 * x, 0 * x, y)


def conj(h, m):
    return mul(mul(h, m), inv(h))


def scale_cols(m, s, t):
    a, b, c, d = m
    return (a * s, b * t, c * s, d * t)


def act(m, z):
    """Moebius action on a complex point (float backend only)."""
    a, b, c, d = m
    return (a * z + b) / (c * z + d)


def act_h(m, v):
    """Action on a homogeneous boundary point ``(x, y)`` representing x/y."""
    a, b, c, d = m
    x, y = v
    return (a * x + b * y, c * x + d * y)


def max_abs_diff(m, n):
    return max(abs(x - y) for x, y in zip(m, n))


def eigvec(m, lam):
    """Eigenvector of ``m`` for eigenvalue ``lam`` (stable choice of two formulas)."""
    a, b, c, d = m
    v1 = (b, lam - a)
    v2 = (lam - d, c)
    if abs(v1[0]) + abs(v1[1]) >= abs(v2[0]) + abs(v2[1]):
        return v1
    return v2


def hyperbolic_frame(m, bk=FLOAT):
    """Return ``(F, sign, half_length)`` with m = F * sign*diag(e^l/2, e^-l/2) * F^-1.

    F sends 0 to the repelling and infinity to the attracting fixed point, so
    it maps the upward imaginary axis onto the oriented axis of ``m``.
    """
    t = tr(m)
    if not abs(t) > 2:
        raise ValueError("matrix is not hyperbolic")
    sign = 1 if t > 0 else -1
    half = bk.acosh(abs(t) / 2)
    lam_big = sign * bk.exp(half)
    lam_small = sign * bk.exp(-half)
    va = eigvec(m, lam_big)
    vr = eigvec(m, lam_small)
    f = (va[0], vr[0], va[1], vr[1])
    dt = det(f)
    if dt < 0:
        f = (f[0], -f[1], f[2], -f[3])
        dt = -dt
    s = 1 / bk.sqrt(dt)
    f = tuple(x * s for x in f)
    return f, sign, half


def fixed_points_h(m, bk=FLOAT):
    """Homogeneous (repelling, attracting) fixed points of a hyperbolic matrix."""
    f, _, _ = hyperbolic_frame(m, bk)
    return (f[1], f[3]), (f[0], f[2])


def translation(t, bk=FLOAT):
    """Translation by hyperbolic distance ``t`` along the upward imaginary axis."""
    return diag(bk.exp(t / 2), bk.exp(-t / 2))


W = (0.0, -1.0, 1.0, 0.0)

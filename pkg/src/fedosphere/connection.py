"""Geometry of T*S^2: frame forms, the phase-space connection and its curvature.

The frame is ``theta = x cross dx`` and ``alpha = x cross dp``; inverting gives
``dx = theta cross x`` and ``dp = alpha cross x - p cross theta``.  The
connection acts on the fiber generators by

    D s = theta cross s
    D k = theta cross k - (2/3)(theta cross x)(p.s) + (1/3)(p.theta)(s cross x)

and on forms by the exterior derivative, with ``d theta = dx cross dx`` and
``d alpha = dx cross dp`` computed from the definitions (so ``D^2 f = 0`` is a
genuine check, not an input).
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Derivation, Scalar
from .weyl import AL1, AL2, TH1, TH2, Algebra, OpExpr, VecOp, cross, dot, form_degree

__all__ = ["Frame", "levi_civita"]


def levi_civita(a: int, b: int, c: int) -> int:
    return (a - b) * (b - c) * (c - a) // 2


class Frame:
    """Named geometric objects of the sphere phase space and the connection ``D``."""

    def __init__(self, alg: Algebra | None = None, jet_order: int = 3):
        self.alg = alg if alg is not None else Algebra(jet_order=jet_order)
        a = self.alg
        tw = a.tower
        self.tower = tw
        self.x = a.vec("x")
        self.p = a.vec("p")
        self.s = a.vec("s")
        self.k = a.vec("k")
        self.theta = a.vec("theta")
        self.alpha = a.vec("alpha")
        self.z = self.p - cross(self.x, self.k)
        self.omega = dot(self.alpha, self.theta)
        self.omt = Fraction(1, 2) * dot(self.x, cross(self.theta, self.theta))
        self.SS = a.scalar(tw.SS)
        self.R = a.scalar(tw.R)
        self.Rinv = a.scalar(tw.R.inv())

        self.dx = cross(self.theta, self.x)
        self.dp = cross(self.alpha, self.x) - cross(self.p, self.theta)
        ds = cross(self.theta, self.s)
        self._coef_D = Derivation(
            tw,
            {
                "x1": self.dx[0],
                "x2": self.dx[1],
                "p1": self.dp[0],
                "p2": self.dp[1],
                "s1": ds[0],
                "s2": ds[1],
            },
            a.zero,
        )
        ps = dot(self.p, self.s)
        dk = (
            cross(self.theta, self.k)
            - Fraction(2, 3) * (cross(self.theta, self.x) * ps)
            + Fraction(1, 3) * (dot(self.p, self.theta) * cross(self.s, self.x))
        )
        self._dk = (dk[0], dk[1])
        dth = cross(self.dx, self.dx)
        dal = cross(self.dx, self.dp)
        self._dgen = {TH1: dth[0], TH2: dth[1], AL1: dal[0], AL2: dal[1]}
        self._dform: dict[int, OpExpr] = {0: a.zero}
        self._dkword: dict[tuple, OpExpr] = {(0, 0): a.zero}

    # -- the connection ----------------------------------------------------------

    def d_scalar(self, c: Scalar) -> OpExpr:
        return self._coef_D(c)

    def _d_form(self, mask: int) -> OpExpr:
        v = self._dform.get(mask)
        if v is not None:
            return v
        a = self.alg
        low = mask & -mask
        rest = mask ^ low
        g = a.mono(low)
        # D(g * rest) = D(g) rest - g D(rest)
        v = self._dgen[low] * a.mono(rest) - g * self._d_form(rest)
        self._dform[mask] = v
        return v

    def _d_kword(self, i: int, j: int) -> OpExpr:
        key = (i, j)
        v = self._dkword.get(key)
        if v is not None:
            return v
        a = self.alg
        if j > 0:
            v = self._d_kword(i, j - 1) * a.k(2) + a.mono(0, i, j - 1) * self._dk[1]
        else:
            v = self._d_kword(i - 1, 0) * a.k(1) + a.mono(0, i - 1, 0) * self._dk[0]
        self._dkword[key] = v
        return v

    def D(self, A):
        """Graded covariant derivative of an ``OpExpr`` or ``VecOp``."""
        if isinstance(A, VecOp):
            return A.map(self.D)
        a = self.alg
        out = a.zero
        for (mask, i, j), c in A.terms.items():
            phi = a.mono(mask)
            K = a.mono(0, i, j)
            dc = self.d_scalar(c)
            if dc:
                out = out + dc * a.mono(mask, i, j)
            if mask:
                out = out + (self._d_form(mask) * K).scale(c)
            if i or j:
                t = phi * self._d_kword(i, j)
                if form_degree(mask) & 1:
                    t = -t
                out = out + t.scale(c)
        return out

    def D2(self, A):
        return self.D(self.D(A))

    # -- conveniences ------------------------------------------------------------

    def eps_contract(self, i: int, u: VecOp, w: VecOp) -> OpExpr:
        out = self.alg.zero
        for b in range(3):
            for c in range(3):
                e = levi_civita(i, b, c)
                if e:
                    out = out + e * (u[b] * w[c])
        return out

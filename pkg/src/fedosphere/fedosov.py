"""Fedosov data on T*S^2: curvature operator, the r-equation and its solutions.

With ``i hbar = 1`` the fiber derivation is ``D^ = [Q^, .]`` where

    Q^ = (s.alpha - k.theta) + r,        d^ h = [s.alpha - k.theta, h],

and ``r`` must satisfy ``Omega - D r + d^ r + r^2 = 0``.  The ansatz

    r = r0 + f z.s (x cross s).theta + g z.(x cross s) s.theta + h s.theta

solves it exactly when ``g`` is tied to ``f`` by ``g_condition``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import flint

from .connection import Frame
from .scalars import EpsPoly, Scalar, d_fiber
from .weyl import OpExpr, cross, dot, graded_comm

__all__ = [
    "DegenerateG",
    "Fedosov",
    "FnSpec",
    "TruncationTooSmall",
    "GaugeResult",
]


class DegenerateG(ArithmeticError):
    pass


class TruncationTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class FnSpec:
    """A function of ``s^2`` realised as a field element."""

    value: Scalar
    label: str = ""

    @classmethod
    def const(cls, tower, q) -> "FnSpec":
        return cls(tower.const(Fraction(q)), str(Fraction(q)))

    @classmethod
    def jet(cls, tower, name: str) -> "FnSpec":
        return cls(tower.jet(name, 0), name)

    @classmethod
    def rational(cls, tower, num: Sequence, den: Sequence = (1,), label: str = "") -> "FnSpec":
        """``num(SS)/den(SS)`` from coefficient lists (constant term first)."""
        ss = tower.SS

        def horner(cs):
            acc = tower.zero
            for c in reversed(list(cs)):
                acc = acc * ss + tower.const(Fraction(c))
            return acc

        return cls(horner(num) / horner(den), label or f"rational({list(num)}/{list(den)})")

    def prime(self) -> Scalar:
        """Derivative with respect to ``s^2``."""
        tw = self.value.tower
        return d_fiber(self.value, "s1") / d_fiber(tw.SS, "s1") if self.value.depends_on(
            {"s1", "s2", "rho"} | {f"{n}{j}" for n in tw.jet_names for j in range(tw.jet_order + 1)}
        ) else tw.zero

    def is_constant(self) -> bool:
        return self.value.is_constant()


def _is_fiber_dependent(fr: Frame, c: Scalar) -> bool:
    return not fr.alg.is_fiber_free(c)


@dataclass
class GaugeResult:
    r_prime: EpsPoly
    U: EpsPoly
    Uinv: EpsPoly
    residual: EpsPoly
    flat_defect: EpsPoly  # D~ r' - r'^2


class Fedosov:
    """Curvature operator, ``d^``, ``D^`` and the r-equation on a frame."""

    def __init__(self, frame: Frame | None = None, jet_order: int = 3):
        self.frame = frame if frame is not None else Frame(jet_order=jet_order)
        fr = self.frame
        self.alg = fr.alg
        self.tower = fr.tower
        self.sa = dot(fr.s, fr.alpha) - dot(fr.k, fr.theta)
        self.xs = cross(fr.x, fr.s)
        self.s_th = dot(fr.s, fr.theta)
        self.xs_th = dot(self.xs, fr.theta)
        self.zs = dot(fr.z, fr.s)
        self.zxs = dot(fr.z, self.xs)
        self._omega_op: OpExpr | None = None
        self._r0: OpExpr | None = None

    # -- building blocks ----------------------------------------------------------

    def dhat(self, h: OpExpr) -> OpExpr:
        return graded_comm(self.sa, h)

    def build_Omega(self) -> OpExpr:
        if self._omega_op is None:
            fr = self.frame
            third = Fraction(1, 3)
            self._omega_op = third * (dot(fr.s, fr.alpha) * self.s_th - fr.SS * fr.omega) + dot(
                cross(fr.x, fr.k), fr.s
            ) * fr.omt
        return self._omega_op

    def build_r0(self) -> OpExpr:
        if self._r0 is None:
            fr = self.frame
            self._r0 = Fraction(1, 3) * (dot(fr.k, fr.theta) * fr.SS - dot(fr.k, fr.s) * self.s_th)
        return self._r0

    def fn(self, spec) -> FnSpec:
        if isinstance(spec, FnSpec):
            return spec
        if isinstance(spec, str):
            return FnSpec.jet(self.tower, spec)
        return FnSpec.const(self.tower, spec)

    def build_r(self, f, g, h=0) -> OpExpr:
        """The rotationally symmetric ansatz; functions of ``s^2`` sit to the left."""
        f, g, h = self.fn(f), self.fn(g), self.fn(h)
        r = self.build_r0()
        r = r + f.value * (self.zs * self.xs_th)
        r = r + g.value * (self.zxs * self.s_th)
        r = r + h.value * self.s_th
        return r

    def r_solution_display(self) -> OpExpr:
        """``-(1/3)(p.s)((x cross s).theta) + z.(x cross s) s.theta``."""
        fr = self.frame
        return Fraction(-1, 3) * (dot(fr.p, fr.s) * self.xs_th) + self.zxs * self.s_th

    def g_condition(self, f) -> FnSpec:
        f = self.fn(f)
        tw = self.tower
        ss = tw.SS
        fv, fp = f.value, f.prime()
        third = tw.const(Fraction(1, 3))
        num = ss * ((fv + third) ** 2 - 2 * fp) - 3 * fv
        den = ss * ((fv + third) + 2 * ss * fp) + 1
        if den.is_zero():
            raise DegenerateG(f"g-condition denominator vanishes for f = {f.label}")
        return FnSpec(num / den, f"g[{f.label}]")

    # -- the r-equation ---------------------------------------------------------------

    def residual_r(self, r: OpExpr, Omega: OpExpr | None = None) -> OpExpr:
        Om = self.build_Omega() if Omega is None else Omega
        return Om - self.frame.D(r) + self.dhat(r) + r * r

    def is_central(self, E: OpExpr) -> bool:
        a = self.alg
        gens = (a.var("s1"), a.var("s2"), a.k(1), a.k(2))
        return all(graded_comm(E, y).is_zero() for y in gens)

    def Dhat(self, r: OpExpr):
        Q = self.sa + r

        def act(A):
            if hasattr(A, "map") and not isinstance(A, OpExpr):
                return A.map(act)
            return graded_comm(Q, A)

        return act

    def Dtilde(self, r: OpExpr):
        D = self.frame.D
        Dh = self.Dhat(r)

        def act(A):
            if hasattr(A, "map") and not isinstance(A, OpExpr):
                return A.map(act)
            return D(A) - Dh(A)

        return act

    # -- displayed intermediate results (h = 0) ---------------------------------------

    def display_Dr(self, f, g) -> OpExpr:
        f, g = self.fn(f).value, self.fn(g).value
        fr = self.frame
        c = Fraction(1, 9) - Fraction(2, 3) * g + Fraction(1, 3) * f
        ps = dot(fr.p, fr.s)
        return (
            (c * fr.tower.SS) * (ps * fr.omt)
            + f * (dot(fr.alpha, self.xs) * self.xs_th)
            - g * (dot(fr.s, fr.alpha) * self.s_th)
        )

    def display_dhat_r(self, f, g) -> OpExpr:
        F, G = self.fn(f), self.fn(g)
        f, g, fp = F.value, G.value, F.prime()
        fr = self.frame
        ss = fr.tower.SS
        return (
            -self.build_Omega()
            + (2 * fp * ss + 3 * f + g) * (self.zs * fr.omt)
            - g * (dot(fr.s, fr.alpha) * self.s_th)
            + f * (dot(fr.alpha, self.xs) * self.xs_th)
        )

    def display_r_squared(self, f, g) -> OpExpr:
        F, G = self.fn(f), self.fn(g)
        f, g, fp = F.value, G.value, F.prime()
        fr = self.frame
        ss = fr.tower.SS
        c1 = Fraction(1, 9) - Fraction(2, 3) * g + Fraction(1, 3) * f
        c2 = 2 * g * fp * ss + g * f - f * f - Fraction(2, 3) * f + Fraction(1, 3) * g - Fraction(1, 9)
        return (c1 * ss) * (dot(fr.p, fr.s) * fr.omt) + (c2 * ss) * (self.zs * fr.omt)

    # -- generator-level checks ------------------------------------------------------

    def generators(self):
        a = self.alg
        return {"s1": a.var("s1"), "s2": a.var("s2"), "k1": a.k(1), "k2": a.k(2)}

    def dtilde_squared(self, r: OpExpr) -> dict:
        Dt = self.Dtilde(r)
        return {name: Dt(Dt(y)) for name, y in self.generators().items()}

    def square_identity(self) -> tuple[OpExpr, OpExpr]:
        """``2 (s.alpha - k.theta)^2`` and the transcription of ``omega_AB Theta^A Theta^B``."""
        fr = self.frame
        lhs = 2 * (self.sa * self.sa)
        # omega_AB Theta^A Theta^B with Theta = (theta^a, alpha_a): -2 alpha.theta
        rhs = -2 * fr.omega
        return lhs, rhs

    # -- gauge transformations ----------------------------------------------------

    def gauge_transform(self, r: OpExpr, G: OpExpr, order: int = 3) -> GaugeResult:
        if order < 2:
            raise TruncationTooSmall("truncation order must be at least 2")
        one = self.alg.one
        U = EpsPoly.exp(G, order, one)
        Uinv = EpsPoly.exp(-G, order, one)
        Dt = self.Dtilde(r)
        rp = U.map(Dt) * Uinv
        total = EpsPoly.constant(r, order) + rp
        Om = self.build_Omega()
        D = self.frame.D
        res = EpsPoly.constant(Om, order) - total.map(D) + total.map(self.dhat) + total * total
        defect = rp.map(Dt) - rp * rp
        return GaugeResult(rp, U, Uinv, res, defect)

    # -- trivial quadratic r -----------------------------------------------------------

    def christoffel(self):
        """Matrix ``Gamma[C][A]`` of 1-forms with ``D y^C = Gamma^C_A y^A``."""
        a = self.alg
        D = self.frame.D
        gens = self.generators()
        names = list(gens)
        table = []
        for nm in names:
            dy = D(gens[nm])
            row = []
            for src in names:
                if src.startswith("s"):
                    # linear in s: coefficient is the s-derivative of the k-free part
                    part = OpExpr(a, {k: c for k, c in dy.terms.items() if k[1] == 0 and k[2] == 0})
                    row.append(part.map_coeffs(lambda c, v=src: d_fiber(c, v)))
                else:
                    idx = (1, 0) if src == "k1" else (0, 1)
                    row.append(OpExpr(a, {(m, 0, 0): c for (m, i, j), c in dy.terms.items() if (i, j) == idx}))
            table.append(row)
        # rebuild to confirm linearity
        for C, nm in enumerate(names):
            rebuilt = a.zero
            for A, src in enumerate(names):
                rebuilt = rebuilt + table[C][A] * gens[src]
            if not (rebuilt - D(gens[nm])).is_zero():
                raise ValueError(f"D {nm} is not linear in the generators")
        return names, table

    def trivial_r(self) -> OpExpr:
        """Quadratic ``r`` with ``[r, y^C] = Gamma^C_A y^A`` (symmetric part of ``Gamma^T W^-1``)."""
        a = self.alg
        tw = self.tower
        names, Gam = self.christoffel()
        gens = self.generators()
        M = a.M
        # W^{AB} = [y^A, y^B] in the order s1, s2, k1, k2
        W = [[tw.zero] * 4 for _ in range(4)]
        for i in range(2):
            for j in range(2):
                W[i][2 + j] = M[i][j]
                W[2 + j][i] = -M[i][j]
        Winv = _invert(tw, W)
        coef = [[a.zero] * 4 for _ in range(4)]
        for A in range(4):
            for B in range(4):
                acc = a.zero
                for C in range(4):
                    if not Winv[C][B].is_zero():
                        acc = acc + Winv[C][B] * Gam[C][A]
                coef[A][B] = acc
        r = a.zero
        ys = [gens[n] for n in names]
        for A in range(4):
            for B in range(4):
                sym = Fraction(1, 2) * (coef[A][B] + coef[B][A])
                if sym:
                    r = r + Fraction(1, 2) * (sym * (ys[A] * ys[B]))
        return r


def _invert(tw, W):
    """Exact Gauss-Jordan inverse of a small matrix of scalars."""
    n = len(W)
    A = [list(row) + [tw.one if i == j else tw.zero for j in range(n)] for i, row in enumerate(W)]
    for col in range(n):
        piv = next(i for i in range(col, n) if not A[i][col].is_zero())
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].inv()
        A[col] = [v * inv for v in A[col]]
        for i in range(n):
            if i != col and not A[i][col].is_zero():
                fct = A[i][col]
                A[i] = [u - fct * v for u, v in zip(A[i], A[col])]
    return [row[n:] for row in A]

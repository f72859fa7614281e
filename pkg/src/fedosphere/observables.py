"""Flat sections of ``D - D^``: position, momentum and angular momentum.

At ``i hbar = 1``, with ``z = p - x cross k`` and ``R = sqrt(s^2 + 1)``:

    x^ = (x - x cross s) R^-1
    p^ = (z.(x cross s) x + z) R
    L^ = x cross z + (z.s) x - z.(x cross s) s

The square roots stand to the right of the operator factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .connection import Frame, levi_civita
from .fedosov import Fedosov
from .scalars import Scalar
from .weyl import TH1, TH2, Algebra, OpExpr, VecOp, cross, dot, graded_comm, lo

__all__ = ["Observable", "Observables", "SingularFrame", "SLOTS"]


class SingularFrame(ArithmeticError):
    pass


def build_xhat(fr: Frame) -> VecOp:
    return (fr.x - cross(fr.x, fr.s)) * fr.Rinv


def build_phat(fr: Frame) -> VecOp:
    return (dot(fr.z, cross(fr.x, fr.s)) * fr.x + fr.z) * fr.R


def build_lhat(fr: Frame) -> VecOp:
    return cross(fr.x, fr.z) + dot(fr.z, fr.s) * fr.x - dot(fr.z, cross(fr.x, fr.s)) * fr.s


@dataclass
class Observable:
    """A flat section together with its expected classical limit.

    ``classical`` is the same formula built with ``[s, k] = 0``; its
    generator-free part is the leading order (no fiber generators and no
    hbar).  The normal-ordered constant term of ``value`` may differ by
    hbar corrections: for ``p^`` it is ``p + 2x``.
    """

    name: str
    value: VecOp
    leading: tuple  # expected leading order, one Scalar per component
    classical: VecOp

    def lo(self) -> tuple:
        return tuple(lo(c) for c in self.classical)

    def normal_ordered_constant(self) -> tuple:
        return tuple(lo(c) for c in self.value)

    def lo_ok(self) -> bool:
        return all(a == b for a, b in zip(self.lo(), self.leading))


# (vector, form) slots of a 1-form-valued vector
SLOTS = (
    ("x", "s.th"),
    ("x", "xs.th"),
    ("xs", "s.th"),
    ("xs", "xs.th"),
    ("s", "s.th"),
    ("s", "xs.th"),
)


class Observables:
    def __init__(self, fed: Fedosov | None = None, f=Fraction(-1, 3), g=1, h=0):
        self.fed = fed if fed is not None else Fedosov()
        self.frame: Frame = self.fed.frame
        self.alg = self.frame.alg
        self.tower = self.frame.tower
        self.r = self.fed.build_r(f, g, h)
        self.Dtilde = self.fed.Dtilde(self.r)
        self._cache: dict = {}

    # -- constructors ---------------------------------------------------------------

    def xhat(self) -> VecOp:
        if "x" not in self._cache:
            self._cache["x"] = build_xhat(self.frame)
        return self._cache["x"]

    def phat(self) -> VecOp:
        if "p" not in self._cache:
            self._cache["p"] = build_phat(self.frame)
        return self._cache["p"]

    def lhat(self) -> VecOp:
        if "L" not in self._cache:
            self._cache["L"] = build_lhat(self.frame)
        return self._cache["L"]

    def classical_frame(self) -> Frame:
        if "classical" not in self._cache:
            self._cache["classical"] = Frame(Algebra(self.tower, classical=True))
        return self._cache["classical"]

    def observable(self, name: str) -> Observable:
        fr = self.frame
        build, expected = {
            "x": (build_xhat, fr.x),
            "p": (build_phat, fr.p),
            "L": (build_lhat, cross(fr.x, fr.p)),
        }[name]
        value = {"x": self.xhat, "p": self.phat, "L": self.lhat}[name]()
        classical = build(self.classical_frame())
        return Observable(name, value, tuple(c.scalar_value() for c in expected), classical)

    def flatness(self, A: VecOp) -> VecOp:
        return A.map(self.Dtilde)

    # -- projected coefficient equations -------------------------------------------------

    def frame_vectors(self) -> dict:
        fr = self.frame
        return {"x": (fr.x, self.tower.one), "xs": (self.fed.xs, self.tower.SS), "s": (fr.s, self.tower.SS)}

    def project(self, W: VecOp) -> dict:
        """Coefficients ``c[(V, form)]`` with ``W = sum c (form) V`` (coefficients left).

        The vectors ``x, x cross s, s`` are orthogonal with squared norms
        ``1, s^2, s^2``; the forms satisfy ``(s.th)((x cross s).th) = omt s^2``.
        """
        fed = self.fed
        omt_x3 = self.tower.x3  # omt = th1 th2 / x3
        out = {}
        leftover = VecOp(self.alg.zero, self.alg.zero, self.alg.zero)
        for vname, (V, norm2) in self.frame_vectors().items():
            if norm2.is_zero():
                raise SingularFrame(f"|{vname}|^2 vanishes")
            c = dot(W, V) * norm2.inv()
            a = (c * fed.xs_th).form_coeff(TH1 | TH2) * (omt_x3 / self.tower.SS)
            b = -((c * fed.s_th).form_coeff(TH1 | TH2) * (omt_x3 / self.tower.SS))
            out[(vname, "s.th")] = a
            out[(vname, "xs.th")] = b
            leftover = leftover + (a * fed.s_th + b * fed.xs_th) * V
        self._last_reconstruction_ok = (leftover - W).is_zero()
        return out

    def reconstructs(self, W: VecOp) -> bool:
        self.project(W)
        return self._last_reconstruction_ok

    def xhat_ansatz(self, v="v", w="w", y="y") -> VecOp:
        fr = self.frame
        v, w, y = (self.fed.fn(t).value for t in (v, w, y))
        return v * fr.x + w * self.fed.xs + y * fr.s

    def phat_ansatz(self, t="t", q="q", n="n", u="u") -> VecOp:
        fr = self.frame
        fed = self.fed
        t, q, n, u = (fed.fn(e).value for e in (t, q, n, u))
        return (fed.zs * t + fed.zxs * q) * fr.x + fr.z * n + cross(fr.z, fr.x) * u

    def xhat_display(self, v="v", w="w", y="y") -> dict:
        """Slot coefficients of the displayed expansion of ``(D - D^) x^``."""
        fed = self.fed
        V, Wf, Y = (fed.fn(e) for e in (v, w, y))
        v, w, y = V.value, Wf.value, Y.value
        vp, wp, yp = V.prime(), Wf.prime(), Y.prime()
        ss = self.tower.SS
        iss = ss.inv()
        a = self.alg
        return {
            ("x", "s.th"): a.scalar(-2 * vp * (ss + 1) + w),
            ("x", "xs.th"): a.scalar(-y),
            ("xs", "s.th"): a.scalar(-v * iss - 2 * wp * (ss + 1) - w * (1 + iss)),
            ("xs", "xs.th"): a.scalar(-y * iss),
            ("s", "s.th"): a.scalar(-2 * yp * (ss + 1) - y * (1 + iss)),
            ("s", "xs.th"): a.scalar((v + w) * iss),
        }

    def phat_display(self, t="t", q="q", n="n", u="u") -> dict:
        """Slot coefficients of the displayed expansion of ``(D - D^) p^``.

        Operator factors (``z.s`` and friends) are read left of the functions
        of ``s^2``, exactly in the printed order.
        """
        fed = self.fed
        fr = self.frame
        T, Q, N, U = (fed.fn(e) for e in (t, q, n, u))
        t, q, n, u = T.value, Q.value, N.value, U.value
        tp, qp, np_, up = T.prime(), Q.prime(), N.prime(), U.prime()
        ss = self.tower.SS
        iss = ss.inv()
        S1 = ss + 1
        zs, zxs = fed.zs, fed.zxs
        x_zs = dot(fr.x, cross(fr.z, fr.s))
        zx_s = dot(cross(fr.z, fr.x), fr.s)
        return {
            ("x", "s.th"): (
                zs * (-2 * tp * S1)
                - zs * (iss * t)
                - zxs * (2 * qp * S1)
                + zxs * ((1 - iss) * q)
                - zs * (iss * u)
                + zxs * (iss * n)
            ),
            ("x", "xs.th"): (
                -(zxs * ((1 + iss) * t)) + zs * (iss * q) + x_zs * (iss * u) - zs * (iss * n)
            ),
            ("xs", "s.th"): (
                -(zs * t) - zxs * q + 2 * (zxs * n) - zs * u + zs * (2 * S1 * up) - zx_s * (2 * S1 * np_)
            )
            * iss,
            ("xs", "xs.th"): (zxs * u) * iss,
            ("s", "s.th"): (
                2 * (zxs * u) + zs * n - zs * (2 * S1 * np_) - zx_s * (2 * S1 * up)
            )
            * iss,
            ("s", "xs.th"): (zs * t + zxs * q - zxs * n) * iss,
        }

    def coefficient_equations(self, which: str = "x", **fns) -> dict:
        A = self.xhat_ansatz(**fns) if which == "x" else self.phat_ansatz(**fns)
        return self.project(self.flatness(A))

    # -- commutator algebra ----------------------------------------------------------

    def commutator_relations(self, phat: VecOp | None = None) -> dict:
        """Name -> (lhs, rhs) pairs of the position/momentum/angular-momentum algebra."""
        X = self.xhat()
        P = self.phat() if phat is None else phat
        L = self.lhat()
        a = self.alg
        rel = {}
        for i in range(3):
            for j in range(3):
                rel[f"xx[{i+1}{j+1}]"] = (graded_comm(X[i], X[j]), a.zero)
                delta = a.one if i == j else a.zero
                rel[f"xp[{i+1}{j+1}]"] = (graded_comm(X[i], P[j]), delta - X[i] * X[j])
                rel[f"pp[{i+1}{j+1}]"] = (graded_comm(P[i], P[j]), X[j] * P[i] - X[i] * P[j])
                rel[f"xL[{i+1}{j+1}]"] = (
                    graded_comm(X[i], L[j]),
                    _eps_sum(a, lambda c, i=i, j=j: levi_civita(i, j, c), X),
                )
                rel[f"LL[{i+1}{j+1}]"] = (
                    graded_comm(L[i], L[j]),
                    _eps_sum(a, lambda c, i=i, j=j: levi_civita(c, i, j), L),
                )
        rel["x.x"] = (dot(X, X), a.one)
        rel["p.x"] = (dot(P, X), a.zero if phat is None else None)
        rel["x.p"] = (dot(X, P), a.scalar(2) if phat is None else None)
        rel["L.x"] = (dot(L, X), a.zero)
        rel["x.L"] = (dot(X, L), a.zero)
        rel["L=xXp"] = (cross(X, P) if phat is None else None, L)
        rel["L=-pXx"] = ((-cross(P, X)) if phat is None else None, L)
        return {k: v for k, v in rel.items() if v[0] is not None and v[1] is not None}

    def pnew(self, A) -> VecOp:
        return self.phat() + VecOp(*(c.scale(self.tower.const(Fraction(A))) for c in self.xhat()))

    def pnew_relations(self, A) -> dict:
        """The commutator list with ``p^ + A x^``; scalar products shift by ``A``."""
        a = self.alg
        P = self.pnew(A)
        X = self.xhat()
        rel = {k: v for k, v in self.commutator_relations(P).items() if k.startswith(("xp", "pp"))}
        A = Fraction(A)
        rel["x.pnew"] = (dot(X, P), a.scalar(2 + A))
        rel["pnew.x"] = (dot(P, X), a.scalar(A))
        return rel

    def hamiltonian(self) -> OpExpr:
        if "H" not in self._cache:
            L = self.lhat()
            self._cache["H"] = dot(L, L)
        return self._cache["H"]


def _eps_sum(a, eps, V: VecOp) -> OpExpr:
    out = a.zero
    for c in range(3):
        e = eps(c)
        if e:
            out = out + e * V[c]
    return out


def scalar_of(e: OpExpr) -> Scalar:
    return e.scalar_value()

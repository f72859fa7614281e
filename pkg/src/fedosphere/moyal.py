"""Flat phase space T*R^n: Moyal star product, Weyl map, star trace and the flat Fedosov case.

Here hbar stays symbolic.  Coefficients live in ``Q[i, hbar, 1/hbar, x, p]``
realised as a polynomial ring in ``I, h, u, x1.., p1..`` with the rewrites
``I^2 -> -1`` and ``h u -> 1``.  The star product is

    f * g = f exp((i hbar / 2)(dl_x dr_p - dl_p dr_x)) g

evaluated as a finite sum: one operand must be a polynomial, which cuts the
series off.  Gaussian symbols ``P exp(Q)`` are closed under derivatives, so
polynomial-times-Gaussian products are exact as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, isqrt

import flint

from .scalars import CRat, _fmpq

__all__ = [
    "DivergentTrace",
    "FlatAlgebra",
    "FlatFedosov",
    "FlatOp",
    "FlatRing",
    "GaussSymbol",
    "HbarScalar",
    "NonTerminatingStar",
    "PhasePoly",
    "moyal_star",
    "poisson",
    "star_comm",
    "star_trace",
    "weyl_map",
]


class NonTerminatingStar(ValueError):
    """Star product whose series does not terminate (two Gaussians)."""


class DivergentTrace(ValueError):
    """Gaussian whose quadratic form is not negative definite."""


# -- hbar Laurent scalars -------------------------------------------------------------------


@dataclass(frozen=True)
class HbarScalar:
    """Laurent polynomial in hbar with Gaussian-rational coefficients."""

    terms: tuple = ()  # sorted ((power, CRat), ...), no zero coefficients

    @classmethod
    def from_dict(cls, d: dict) -> "HbarScalar":
        zero = CRat()
        return cls(tuple(sorted((k, v) for k, v in d.items() if v != zero)))

    @classmethod
    def const(cls, v) -> "HbarScalar":
        return cls.from_dict({0: CRat.coerce(v)})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def coeff(self, k: int) -> CRat:
        return self.as_dict().get(k, CRat())

    def __add__(self, o):
        o = o if isinstance(o, HbarScalar) else HbarScalar.const(o)
        d = self.as_dict()
        for k, v in o.terms:
            d[k] = d.get(k, CRat()) + v
        return HbarScalar.from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return HbarScalar(tuple((k, -v) for k, v in self.terms))

    def __sub__(self, o):
        o = o if isinstance(o, HbarScalar) else HbarScalar.const(o)
        return self + (-o)

    def __mul__(self, o):
        o = o if isinstance(o, HbarScalar) else HbarScalar.const(o)
        d: dict = {}
        for k1, v1 in self.terms:
            for k2, v2 in o.terms:
                d[k1 + k2] = d.get(k1 + k2, CRat()) + v1 * v2
        return HbarScalar.from_dict(d)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def at_ihbar_one(self) -> CRat:
        """Value at ``i hbar = 1``, i.e. ``hbar = -i``."""
        out = CRat()
        for k, v in self.terms:
            out = out + v * _minus_i_pow(k)
        return out

    def __repr__(self):
        if not self.terms:
            return "HbarScalar(0)"
        return "HbarScalar(" + " + ".join(f"({_crat_str(v)})*hbar^{k}" for k, v in self.terms) + ")"


def _minus_i_pow(k: int) -> CRat:
    return [CRat(1), CRat(0, -1), CRat(-1), CRat(0, 1)][k % 4]


def _crat_str(v: CRat) -> str:
    if v.im == 0:
        return str(v.re)
    if v.re == 0:
        return f"{v.im}*i"
    return f"{v.re}+{v.im}*i"


# -- the coefficient ring -------------------------------------------------------------------


class FlatRing:
    """``Q[i, hbar, 1/hbar, x1..xn, p1..pn]`` in canonical form."""

    def __init__(self, n: int = 1):
        if not 1 <= n <= 3:
            raise ValueError("n must be 1, 2 or 3")
        self.n = n
        self.xs = tuple(f"x{i + 1}" for i in range(n))
        self.ps = tuple(f"p{i + 1}" for i in range(n))
        self.names = ("I", "h", "u") + self.xs + self.ps
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names, "lex")
        self.gen = dict(zip(self.names, self.ctx.gens()))

    def reduce(self, f):
        """Apply ``I^2 = -1`` and ``h u = 1``."""
        d: dict = {}
        for e, c in f.to_dict().items():
            a, b, c_u = e[0], e[1], e[2]
            sign = -1 if a & 2 else 1
            h = b - c_u
            key = (a & 1, max(h, 0), max(-h, 0)) + tuple(e[3:])
            d[key] = d.get(key, 0) + sign * c
        return self.ctx.from_dict({k: v for k, v in d.items() if v})

    def poly(self, f) -> "PhasePoly":
        return PhasePoly(self, self.reduce(f))

    def const(self, q) -> "PhasePoly":
        q = CRat.coerce(q)
        return PhasePoly(self, self.ctx.constant(_fmpq(q.re)) + self.gen["I"] * _fmpq(q.im))

    def zero(self) -> "PhasePoly":
        return PhasePoly(self, self.ctx.constant(0))

    def one(self) -> "PhasePoly":
        return PhasePoly(self, self.ctx.constant(1))

    def x(self, a: int) -> "PhasePoly":
        return PhasePoly(self, self.gen[self.xs[a]])

    def p(self, a: int) -> "PhasePoly":
        return PhasePoly(self, self.gen[self.ps[a]])

    def var(self, name: str) -> "PhasePoly":
        return PhasePoly(self, self.gen[name])

    @property
    def hbar(self) -> "PhasePoly":
        return PhasePoly(self, self.gen["h"])

    @property
    def ihbar(self) -> "PhasePoly":
        return PhasePoly(self, self.gen["I"] * self.gen["h"])

    @property
    def inv_ihbar(self) -> "PhasePoly":
        return PhasePoly(self, -self.gen["I"] * self.gen["u"])

    @property
    def phase_vars(self) -> tuple:
        return self.xs + self.ps


@dataclass(frozen=True, eq=False)
class PhasePoly:
    """Polynomial in ``x, p`` with hbar-Laurent, Gaussian-rational coefficients."""

    ring: FlatRing
    f: object  # reduced fmpq_mpoly

    def _wrap(self, o) -> "PhasePoly":
        if isinstance(o, PhasePoly):
            return o
        if isinstance(o, (int, Fraction, CRat)):
            return self.ring.const(o)
        return NotImplemented

    def __add__(self, o):
        o = self._wrap(o)
        if o is NotImplemented:
            return o
        return PhasePoly(self.ring, self.f + o.f)

    __radd__ = __add__

    def __neg__(self):
        return PhasePoly(self.ring, -self.f)

    def __sub__(self, o):
        o = self._wrap(o)
        if o is NotImplemented:
            return o
        return PhasePoly(self.ring, self.f - o.f)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, GaussSymbol):
            return GaussSymbol(self * o.prefactor, o.exponent)
        o = self._wrap(o)
        if o is NotImplemented:
            return o
        return PhasePoly(self.ring, self.ring.reduce(self.f * o.f))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        o = self._wrap(o)
        if o is NotImplemented:
            return False
        return self.f == o.f

    def __hash__(self):
        return hash(str(self.f))

    def is_zero(self) -> bool:
        return self.f.is_zero()

    def diff(self, var: str) -> "PhasePoly":
        return PhasePoly(self.ring, self.f.derivative(var))

    def degree(self) -> int:
        """Total degree in the phase-space variables."""
        if self.f.is_zero():
            return -1
        return max(sum(e[3:]) for e in self.f.to_dict())

    def laurent(self) -> dict:
        """``{k: PhasePoly}`` with ``self = sum_k hbar^k c_k`` and ``c_k`` free of hbar."""
        out: dict = {}
        for e, c in self.f.to_dict().items():
            k = e[1] - e[2]
            key = (e[0], 0, 0) + tuple(e[3:])
            out.setdefault(k, {})[key] = c
        return {k: PhasePoly(self.ring, self.ring.ctx.from_dict(d)) for k, d in out.items()}

    def hbar_coeff(self, k: int) -> "PhasePoly":
        return self.laurent().get(k, self.ring.zero())

    def at_hbar_zero(self) -> "PhasePoly":
        lau = self.laurent()
        if any(k < 0 for k in lau):
            raise ZeroDivisionError("negative powers of hbar")
        return lau.get(0, self.ring.zero())

    def is_hbar_scalar(self) -> bool:
        return all(not any(e[3:]) for e in self.f.to_dict())

    def to_hbar_scalar(self) -> HbarScalar:
        if not self.is_hbar_scalar():
            raise ValueError("depends on phase-space variables")
        d: dict = {}
        for e, c in self.f.to_dict().items():
            k = e[1] - e[2]
            c = Fraction(int(c.p), int(c.q))
            v = CRat(0, c) if e[0] else CRat(c)
            d[k] = d.get(k, CRat()) + v
        return HbarScalar.from_dict(d)

    def __repr__(self):
        return f"PhasePoly({_ring_str(self.f)})"


def _ring_str(f) -> str:
    return str(f).replace("I", "i").replace("h", "hbar").replace("u", "hbar^-1")


@dataclass(frozen=True, eq=False)
class GaussSymbol:
    """``prefactor * exp(exponent)`` with ``exponent`` a quadratic form in ``x, p``."""

    prefactor: PhasePoly
    exponent: PhasePoly

    @property
    def ring(self) -> FlatRing:
        return self.prefactor.ring

    def diff(self, var: str) -> "GaussSymbol":
        P, Q = self.prefactor, self.exponent
        return GaussSymbol(P.diff(var) + P * Q.diff(var), Q)

    def _same(self, o: "GaussSymbol"):
        if not o.exponent == self.exponent:
            raise ValueError("Gaussian symbols with different exponents cannot be added")

    def __add__(self, o):
        if isinstance(o, GaussSymbol):
            self._same(o)
            return GaussSymbol(self.prefactor + o.prefactor, self.exponent)
        return NotImplemented

    def __neg__(self):
        return GaussSymbol(-self.prefactor, self.exponent)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, GaussSymbol):
            return GaussSymbol(self.prefactor * o.prefactor, self.exponent + o.exponent)
        o = self.prefactor._wrap(o)
        if o is NotImplemented:
            return o
        return GaussSymbol(self.prefactor * o, self.exponent)

    __rmul__ = __mul__

    def __eq__(self, o):
        if not isinstance(o, GaussSymbol):
            return False
        if self.prefactor.is_zero() and o.prefactor.is_zero():
            return True
        return self.exponent == o.exponent and self.prefactor == o.prefactor

    __hash__ = None

    def is_zero(self) -> bool:
        return self.prefactor.is_zero()


# -- the star product -----------------------------------------------------------------------


def _is_zero(a) -> bool:
    return a.is_zero()


def moyal_star(f, g, order: int | None = None):
    """Exact ``f * g`` for polynomial-polynomial or polynomial-Gaussian operands.

    ``order`` keeps only bidifferential terms of total order ``<= order``;
    this is the expansion in the deformation parameter with the symbols held
    fixed, which differs from expanding in hbar when a symbol depends on hbar.
    """
    if isinstance(f, GaussSymbol) and isinstance(g, GaussSymbol):
        raise NonTerminatingStar("the star product of two Gaussians does not terminate")
    ring = f.ring
    half = ring.ihbar * Fraction(1, 2)
    # channels: (dl_x_i dr_p_i, +1) and (dl_p_i dr_x_i, -1)
    channels = [(ring.xs[i], ring.ps[i], 1) for i in range(ring.n)]
    channels += [(ring.ps[i], ring.xs[i], -1) for i in range(ring.n)]
    out = []

    def walk(c: int, F, G, weight: PhasePoly, left: int):
        if c == len(channels):
            out.append((F * G) * weight)
            return
        lv, rv, sign = channels[c]
        m = 0
        w = weight
        while not (_is_zero(F) or _is_zero(G)) and m <= left:
            walk(c + 1, F, G, w, left - m)
            m += 1
            F, G = F.diff(lv), G.diff(rv)
            w = w * half * Fraction(sign, m)

    walk(0, f, g, ring.one(), float("inf") if order is None else order)
    if not out:
        return ring.zero()
    total = out[0]
    for t in out[1:]:
        total = total + t
    return total


def star_comm(f, g):
    return moyal_star(f, g) - moyal_star(g, f)


def poisson(f: PhasePoly, g: PhasePoly) -> PhasePoly:
    ring = f.ring
    out = ring.zero()
    for xv, pv in zip(ring.xs, ring.ps):
        out = out + f.diff(xv) * g.diff(pv) - f.diff(pv) * g.diff(xv)
    return out


def weyl_map(word, ring: FlatRing):
    """Symbol of an ordered operator word such as ``["x1", "p1", "x1"]``."""
    out = ring.one()
    for letter in word:
        out = moyal_star(out, ring.var(letter))
    return out


# -- star trace -----------------------------------------------------------------------------


def _rational(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _sqrt_fraction(q: Fraction) -> Fraction | None:
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def _quadratic_form(Q: PhasePoly):
    """``(kappa, A0)`` with ``Q = -(1/2) hbar^kappa v^T A0 v`` over ``v = (x, p)``."""
    ring = Q.ring
    m = 2 * ring.n
    A0 = [[Fraction(0)] * m for _ in range(m)]
    kappa = None
    for e, c in Q.f.to_dict().items():
        if e[0]:
            raise DivergentTrace("complex quadratic form")
        k = e[1] - e[2]
        if kappa is None:
            kappa = k
        elif k != kappa:
            raise ValueError("mixed hbar powers in the quadratic form")
        v = e[3:]
        if sum(v) != 2:
            raise ValueError("exponent must be a homogeneous quadratic form")
        idx = [i for i in range(m) for _ in range(v[i])]
        c = _rational(c)
        if idx[0] == idx[1]:
            A0[idx[0]][idx[0]] = -2 * c
        else:
            A0[idx[0]][idx[1]] = A0[idx[1]][idx[0]] = -c
    if kappa is None:
        raise DivergentTrace("flat exponent")
    return kappa, A0


def _det(A) -> Fraction:
    A = [row[:] for row in A]
    n = len(A)
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if A[r][i]), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            A[i], A[piv] = A[piv], A[i]
            det = -det
        det *= A[i][i]
        for r in range(i + 1, n):
            f = A[r][i] / A[i][i]
            for c in range(i, n):
                A[r][c] -= f * A[i][c]
    return det


def _inverse(A):
    n = len(A)
    M = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for i in range(n):
        piv = next(r for r in range(i, n) if M[r][i])
        M[i], M[piv] = M[piv], M[i]
        p = M[i][i]
        M[i] = [v / p for v in M[i]]
        for r in range(n):
            if r != i and M[r][i]:
                f = M[r][i]
                M[r] = [a - f * b for a, b in zip(M[r], M[i])]
    return [row[n:] for row in M]


@lru_cache(maxsize=None)
def _moment(alpha: tuple, C: tuple) -> Fraction:
    """``E[v^alpha]`` for a centred Gaussian with covariance ``C`` (Isserlis)."""
    idx = [i for i, a in enumerate(alpha) for _ in range(a)]
    if len(idx) % 2:
        return Fraction(0)
    if not idx:
        return Fraction(1)
    first, rest = idx[0], idx[1:]
    total = Fraction(0)
    for j, other in enumerate(rest):
        c = C[first][other]
        if c:
            rem = list(alpha)
            rem[first] -= 1
            rem[other] -= 1
            total += c * _moment(tuple(rem), C)
    return total


def star_trace(A: GaussSymbol) -> HbarScalar:
    """``(2 pi hbar)^-n`` times the phase-space integral of ``A``."""
    ring = A.ring
    n = ring.n
    kappa, A0 = _quadratic_form(A.exponent)
    for k in range(1, 2 * n + 1):
        if _det([row[:k] for row in A0[:k]]) <= 0:
            raise DivergentTrace("quadratic form is not negative definite")
    root = _sqrt_fraction(_det(A0))
    if root is None:
        raise ValueError("determinant is not a rational square; trace would be irrational")
    C = tuple(tuple(r) for r in _inverse(A0))
    # int exp(-v.A v/2) = (2 pi)^n / sqrt(det A), det A = hbar^(2 n kappa) det A0
    total = HbarScalar()
    for e, c in A.prefactor.f.to_dict().items():
        v = tuple(e[3:])
        mom = _moment(v, C)
        if not mom:
            continue
        c = _rational(c)
        coef = CRat(0, c) if e[0] else CRat(c)
        power = e[1] - e[2] - kappa * sum(v) // 2 - n - n * kappa
        total = total + HbarScalar.from_dict({power: coef * (mom / root)})
    return total


# -- oscillator -----------------------------------------------------------------------------


def oscillator(ring: FlatRing | None = None):
    """``H = (x^2 + p^2)/2`` and ``rho0 = 2 exp(-(x^2 + p^2)/hbar)`` for ``n = 1``."""
    ring = ring if ring is not None else FlatRing(1)
    x, p = ring.x(0), ring.p(0)
    H = (x * x + p * p) * Fraction(1, 2)
    u = PhasePoly(ring, ring.gen["u"])
    rho0 = GaussSymbol(ring.const(2), -(x * x + p * p) * u)
    return H, rho0


def oscillator_checks() -> dict:
    """Name -> (ok, detail) for the oscillator ground-state Wigner function."""
    ring = FlatRing(1)
    H, rho = oscillator(ring)
    half_h = ring.hbar * Fraction(1, 2)
    out = {}
    Hr = moyal_star(H, rho)
    rH = moyal_star(rho, H)
    out["H*rho0"] = ((Hr - rho * half_h).is_zero(), "H * rho0 - (hbar/2) rho0")
    out["[H,rho0]"] = ((Hr - rH).is_zero(), "H * rho0 - rho0 * H")
    lead = moyal_star(H, rho, order=0)
    first = moyal_star(H, rho, order=1)
    out["classical"] = (
        lead == rho * H and first == lead,
        "zeroth order of the series is H rho0; the first order vanishes",
    )
    tr = star_trace(rho)
    out["Tr rho0"] = (tr == HbarScalar.const(1), f"Tr rho0 = {tr}")
    trH = star_trace(rH)
    out["Tr rho0*H"] = (trH == HbarScalar.from_dict({1: CRat(Fraction(1, 2))}), f"Tr(rho0 * H) = {trH}")
    odd = GaussSymbol(ring.x(0), rho.exponent)
    out["Tr odd"] = (star_trace(odd).is_zero(), "odd moment")
    return out


# -- the flat Weyl algebra ------------------------------------------------------------------


@dataclass(eq=False)
class FlatOp:
    """``sum c(x, p) phi s^a k^b`` with forms ``dx1.., dp1..`` (bits ``0..n-1`` and ``n..2n-1``)."""

    alg: "FlatAlgebra"
    terms: dict = field(default_factory=dict)  # (mask, s exps, k exps) -> reduced mpoly

    def __add__(self, o):
        o = self.alg.lift(o)
        out = dict(self.terms)
        for k, v in o.terms.items():
            _acc(out, k, v)
        return FlatOp(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return FlatOp(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-self.alg.lift(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        return self.alg.mul(self, self.alg.lift(o))

    def __rmul__(self, o):
        return self.alg.mul(self.alg.lift(o), self)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, o):
        return (self - o).is_zero()

    __hash__ = None

    def parity_parts(self):
        ev = {k: v for k, v in self.terms.items() if not bin(k[0]).count("1") & 1}
        od = {k: v for k, v in self.terms.items() if bin(k[0]).count("1") & 1}
        return FlatOp(self.alg, ev), FlatOp(self.alg, od)

    def scalar_value(self) -> PhasePoly:
        if set(self.terms) - {self.alg._unit}:
            raise ValueError("not a scalar")
        return PhasePoly(self.alg.ring, self.terms.get(self.alg._unit, self.alg.ring.ctx.constant(0)))


def _acc(d: dict, k, v):
    w = d.get(k)
    w = v if w is None else w + v
    if w.is_zero():
        d.pop(k, None)
    else:
        d[k] = w


def _form_sign(m1: int, m2: int) -> int:
    if m1 & m2:
        return 0
    swaps = 0
    b = m2
    while b:
        low = b & -b
        swaps += bin(m1 & ~(2 * low - 1)).count("1")
        b ^= low
    return -1 if swaps & 1 else 1


class FlatAlgebra:
    """Weyl algebra on ``s^a, k_a`` with ``[s^a, k_b] = i hbar delta^a_b`` over ``FlatRing``."""

    def __init__(self, ring: FlatRing | None = None, n: int = 1):
        self.ring = ring if ring is not None else FlatRing(n)
        self.n = self.ring.n
        self._zero_e = (0,) * self.n
        self._unit = (0, self._zero_e, self._zero_e)
        self._reorder = lru_cache(maxsize=None)(self._reorder_impl)

    def lift(self, o) -> FlatOp:
        if isinstance(o, FlatOp):
            return o
        if isinstance(o, PhasePoly):
            return self.scalar(o)
        return self.scalar(self.ring.const(o))

    def scalar(self, c: PhasePoly) -> FlatOp:
        if c.is_zero():
            return FlatOp(self, {})
        return FlatOp(self, {self._unit: c.f})

    @property
    def zero(self) -> FlatOp:
        return FlatOp(self, {})

    @property
    def one(self) -> FlatOp:
        return self.scalar(self.ring.one())

    def _e(self, a: int) -> tuple:
        return tuple(int(i == a) for i in range(self.n))

    def s(self, a: int) -> FlatOp:
        return FlatOp(self, {(0, self._e(a), self._zero_e): self.ring.ctx.constant(1)})

    def k(self, a: int) -> FlatOp:
        return FlatOp(self, {(0, self._zero_e, self._e(a)): self.ring.ctx.constant(1)})

    def dx(self, a: int) -> FlatOp:
        return FlatOp(self, {(1 << a, self._zero_e, self._zero_e): self.ring.ctx.constant(1)})

    def dp(self, a: int) -> FlatOp:
        return FlatOp(self, {(1 << (self.n + a), self._zero_e, self._zero_e): self.ring.ctx.constant(1)})

    def _reorder_impl(self, kexp: tuple, sexp: tuple) -> tuple:
        """``k^kexp s^sexp`` normal ordered: ``((coef mpoly, s exps, k exps), ...)``."""
        ring = self.ring
        mih = -ring.gen["I"] * ring.gen["h"]  # k s = s k - i hbar
        per_index = []
        for b, c in zip(kexp, sexp):
            opts = []
            for j in range(min(b, c) + 1):
                coef = comb(b, j) * comb(c, j) * factorial(j)
                opts.append((ring.reduce(mih**j * coef), c - j, b - j))
            per_index.append(opts)
        out = [(ring.ctx.constant(1), (), ())]
        for opts in per_index:
            out = [(ring.reduce(c0 * c1), se + (s,), ke + (k,)) for c0, se, ke in out for c1, s, k in opts]
        return tuple(out)

    def mul(self, A: FlatOp, B: FlatOp) -> FlatOp:
        out: dict = {}
        for (m1, s1, k1), c1 in A.terms.items():
            for (m2, s2, k2), c2 in B.terms.items():
                sg = _form_sign(m1, m2)
                if not sg:
                    continue
                c12 = self.ring.reduce(c1 * c2)
                for c, se, ke in self._reorder(k1, s2):
                    key = (
                        m1 | m2,
                        tuple(a + b for a, b in zip(s1, se)),
                        tuple(a + b for a, b in zip(ke, k2)),
                    )
                    _acc(out, key, self.ring.reduce(c * c12) * sg)
        return FlatOp(self, out)

    def comm(self, A: FlatOp, B: FlatOp) -> FlatOp:
        Ae, Ao = A.parity_parts()
        Be, Bo = B.parity_parts()
        return (Ae * B - B * Ae) + (Ao * Be - Be * Ao) + (Ao * Bo + Bo * Ao)

    def d(self, A: FlatOp) -> FlatOp:
        """Exterior derivative acting on the coefficients ``c(x, p)``."""
        out = self.zero
        ring = self.ring
        for (mask, se, ke), c in A.terms.items():
            mono = FlatOp(self, {(mask, se, ke): ring.ctx.constant(1)})
            for a in range(self.n):
                for var, form in ((ring.xs[a], self.dx(a)), (ring.ps[a], self.dp(a))):
                    dc = c.derivative(var)
                    if not dc.is_zero():
                        out = out + self.scalar(PhasePoly(ring, dc)) * form * mono
        return out


class FlatFedosov:
    """Flat Fedosov data: ``D = d``, ``Omega = 0``, ``r = 0`` and ``D^ = (1/i hbar)[s.dp - k.dx, .]``."""

    def __init__(self, n: int = 1):
        self.alg = FlatAlgebra(n=n)
        a = self.alg
        self.n = n
        self.Q = a.zero
        for i in range(n):
            self.Q = self.Q + a.s(i) * a.dp(i) - a.k(i) * a.dx(i)
        self.inv_ihbar = a.scalar(a.ring.inv_ihbar)

    def dhat(self, A: FlatOp) -> FlatOp:
        return self.inv_ihbar * self.alg.comm(self.Q, A)

    def dtilde(self, A: FlatOp) -> FlatOp:
        return self.alg.d(A) - self.dhat(A)

    def residual(self, r: FlatOp) -> FlatOp:
        """``Omega - d r + d^ r + (1/i hbar) r^2`` with ``Omega = 0``."""
        return -self.alg.d(r) + self.dhat(r) + self.inv_ihbar * (r * r)

    def xhat(self, a: int) -> FlatOp:
        A = self.alg
        return A.scalar(A.ring.x(a)) + A.s(a)

    def phat(self, a: int) -> FlatOp:
        A = self.alg
        return A.scalar(A.ring.p(a)) + A.k(a)

    def checks(self) -> dict:
        """Name -> (ok, detail) for the flat Fedosov construction."""
        A = self.alg
        out = {}
        res = self.residual(A.zero)
        out["residual(0)"] = (res.is_zero(), "r = 0 solves the flat equation")
        ihbar = A.scalar(A.ring.ihbar)
        for a in range(self.n):
            X, P = self.xhat(a), self.phat(a)
            out[f"flat xhat{a + 1}"] = (self.dtilde(X).is_zero(), "(d - D^)(x + s)")
            out[f"flat phat{a + 1}"] = (self.dtilde(P).is_zero(), "(d - D^)(p + k)")
            for g, G in (("s", A.s(a)), ("k", A.k(a))):
                out[f"Dtilde^2 {g}{a + 1}"] = (self.dtilde(self.dtilde(G)).is_zero(), "(d - D^)^2")
            for b in range(self.n):
                delta = ihbar if a == b else A.zero
                out[f"[xhat{a + 1},phat{b + 1}]"] = ((A.comm(X, self.phat(b)) - delta).is_zero(), "i hbar delta")
                out[f"[xhat{a + 1},xhat{b + 1}]"] = (A.comm(X, self.xhat(b)).is_zero(), "0")
                out[f"[phat{a + 1},phat{b + 1}]"] = (A.comm(P, self.phat(b)).is_zero(), "0")
            XP = X * P
            out[f"flat xhat{a + 1}phat{a + 1}"] = (self.dtilde(XP).is_zero(), "products of flat sections are flat")
        return out

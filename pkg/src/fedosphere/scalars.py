"""Exact coefficient arithmetic for the sphere engine.

Every commuting coefficient lives in one field, built as a tower over Q:

* the imaginary unit ``I`` (``I**2 = -1``),
* the chart variables ``x1, x2, p1, p2, s1, s2``,
* ``x3`` with ``x3**2 = 1 - x1**2 - x2**2`` (the dense chart ``x3 != 0``),
* ``rho`` with ``rho**2 = x3**2 * (SS + 1)``, i.e. ``rho = x3 * R`` where
  ``R = sqrt(SS + 1)``.  Using ``rho`` rather than ``R`` keeps the defining
  relation polynomial,
* formal jet symbols ``f0, f1, ..., fJ`` standing for ``f(SS), f'(SS), ...``.

``p3`` and ``s3`` are never stored: they are the aliases
``-(x1*p1 + x2*p2)/x3`` and ``-(x1*s1 + x2*s2)/x3``.

An element is ``num/den`` with ``num`` reduced to degree <= 1 in each of
``I, x3, rho`` and ``den`` free of them, coprime and monic.  That form is
unique, so structural equality is algebraic equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import flint

__all__ = [
    "CRat",
    "DivisionByZero",
    "EpsPoly",
    "JetOverflow",
    "PhasePoint",
    "PoleAtOrigin",
    "PoleAtPoint",
    "Scalar",
    "Derivation",
    "Tower",
    "d_base",
    "d_fiber",
    "eval_base_at",
    "random_point",
    "sphere_point",
]


class DivisionByZero(ZeroDivisionError):
    pass


class JetOverflow(ArithmeticError):
    pass


class PoleAtPoint(ArithmeticError):
    pass


class PoleAtOrigin(ArithmeticError):
    pass


DEFAULT_JETS = ("f", "g", "h", "v", "w", "y", "t", "q", "n", "u")
FREE_VARS = ("x1", "x2", "p1", "p2", "s1", "s2")
ALGEBRAIC = ("I", "x3", "rho")
BASE_VARS = ("x1", "x2", "p1", "p2")


def _fmpq(q) -> flint.fmpq:
    if isinstance(q, flint.fmpq):
        return q
    q = Fraction(q)
    return flint.fmpq(q.numerator, q.denominator)


@dataclass(frozen=True)
class CRat:
    """Gaussian rational ``re + i*im``."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, v) -> "CRat":
        if isinstance(v, CRat):
            return v
        if isinstance(v, complex):
            raise TypeError("floating point complex values are not exact")
        return cls(Fraction(v))

    def __add__(self, o):
        o = CRat.coerce(o)
        return CRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CRat(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-CRat.coerce(o))

    def __rsub__(self, o):
        return CRat.coerce(o) - self

    def __mul__(self, o):
        o = CRat.coerce(o)
        return CRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "CRat":
        return CRat(self.re, -self.im)

    def inv(self) -> "CRat":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise DivisionByZero("inverse of 0")
        return CRat(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * CRat.coerce(o).inv()

    def __rtruediv__(self, o):
        return CRat.coerce(o) * self.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = CRat(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, o):
        try:
            o = CRat.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*I"
        return f"({self.re} + {self.im}*I)"


class Tower:
    """The coefficient field, parametrised by the jet order ``J``."""

    def __init__(self, jet_order: int = 3, jet_names: Sequence[str] = DEFAULT_JETS):
        if jet_order < 1:
            raise ValueError("jet order must be at least 1")
        self.jet_order = jet_order
        self.jet_names = tuple(jet_names)
        jets = tuple(f"{n}{j}" for n in self.jet_names for j in range(jet_order + 1))
        self.names = ALGEBRAIC + FREE_VARS + jets
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names, "lex")
        self.gen = dict(zip(self.names, self.ctx.gens()))
        self.index = {nm: i for i, nm in enumerate(self.names)}
        g = self.gen
        x1, x2, s1, s2 = g["x1"], g["x2"], g["s1"], g["s2"]
        self._zero_p = self.ctx.constant(0)
        self._one_p = self.ctx.constant(1)
        self.X = 1 - x1**2 - x2**2  # value of x3**2
        self.Y = self.X * (s1**2 + s2**2 + 1) + (x1 * s1 + x2 * s2) ** 2  # value of rho**2
        self._relations = (
            (0, g["I"] ** 2 + 1),
            (1, g["x3"] ** 2 - self.X),
            (2, g["rho"] ** 2 - self.Y),
        )
        self.zero = Scalar(self, self._zero_p, self._one_p)
        self.one = Scalar(self, self._one_p, self._one_p)
        self._jet_of = {}
        for n in self.jet_names:
            for j in range(jet_order + 1):
                self._jet_of[f"{n}{j}"] = (n, j)

    def __repr__(self):
        return f"Tower(jet_order={self.jet_order})"

    # -- construction -------------------------------------------------

    def reduce(self, p):
        degs = p.degrees()
        for idx, rel in self._relations:
            if degs[idx] > 1:
                p = divmod(p, rel)[1]
        return p

    def make(self, num, den=None) -> "Scalar":
        """Canonicalise ``num/den``; ``den`` must be free of ``I, x3, rho``."""
        if den is None:
            den = self._one_p
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        num = self.reduce(num)
        if num.is_zero():
            return self.zero
        if not den.is_constant():
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return Scalar(self, num, den)

    def const(self, q) -> "Scalar":
        if isinstance(q, Scalar):
            return q
        if isinstance(q, CRat):
            return self.const(q.re) + self.const(q.im) * self.var("I")
        return Scalar(self, self.ctx.constant(_fmpq(q)), self._one_p)

    def var(self, name: str) -> "Scalar":
        if name not in self.gen:
            raise KeyError(f"unknown variable {name!r}")
        return Scalar(self, self.gen[name], self._one_p)

    def jet(self, fname: str, order: int = 0) -> "Scalar":
        if fname not in self.jet_names:
            raise KeyError(f"no jet symbol registered for {fname!r}")
        if order > self.jet_order:
            raise JetOverflow(f"{fname}^({order}) exceeds jet order {self.jet_order}")
        return self.var(f"{fname}{order}")

    # -- named constants ------------------------------------------------

    @property
    def x3(self) -> "Scalar":
        return self.var("x3")

    @property
    def rho(self) -> "Scalar":
        return self.var("rho")

    @property
    def I(self) -> "Scalar":  # noqa: E743
        return self.var("I")

    @property
    def p3(self) -> "Scalar":
        g = self.gen
        return self.make(-(g["x1"] * g["p1"] + g["x2"] * g["p2"]) * g["x3"], self.X)

    @property
    def s3(self) -> "Scalar":
        g = self.gen
        return self.make(-(g["x1"] * g["s1"] + g["x2"] * g["s2"]) * g["x3"], self.X)

    @property
    def SS(self) -> "Scalar":
        """``s.s = s1^2 + s2^2 + s3^2`` as an explicit rational function."""
        return self.make(self.Y - self.X, self.X)

    @property
    def R(self) -> "Scalar":
        """``sqrt(SS + 1) = rho/x3``."""
        return self.make(self.gen["rho"] * self.gen["x3"], self.X)

    def _explicit(self, expr) -> "Scalar":
        return expr if isinstance(expr, Scalar) else self.make(expr)

    def dSS(self, v: str) -> "Scalar":
        return _tower_cache(self).dSS[v]

    def dY(self, v: str) -> "Scalar":
        return _tower_cache(self).dY[v]

    def jet_parts(self, name: str):
        return self._jet_of.get(name)


class _TowerCache:
    def __init__(self, tw: Tower):
        ss = tw.SS
        self.dSS = {}
        self.dY = {}
        for v in FREE_VARS:
            n, d = ss.num, ss.den
            self.dSS[v] = tw.make(n.derivative(v) * d - n * d.derivative(v), d * d)
            self.dY[v] = tw.make(tw.Y.derivative(v))
        self.inv_x3 = tw.make(tw.gen["x3"], tw.X)
        self.inv_2rho = tw.make(tw.gen["rho"], 2 * tw.Y)


_caches: dict[int, _TowerCache] = {}


def _tower_cache(tw: Tower) -> _TowerCache:
    c = _caches.get(id(tw))
    if c is None:
        c = _caches[id(tw)] = _TowerCache(tw)
    return c


@lru_cache(maxsize=None)
def default_tower(jet_order: int = 3) -> Tower:
    return Tower(jet_order)


def _split_linear(tw: Tower, p, name: str):
    """Write ``p = a0 + a1*name`` for ``p`` of degree <= 1 in ``name``."""
    a0 = p.subs({name: 0})
    a1 = (p - a0) / tw.gen[name]
    return a0, a1


class Scalar:
    """An element of the coefficient field."""

    __slots__ = ("tower", "num", "den")

    def __init__(self, tower: Tower, num, den):
        self.tower = tower
        self.num = num
        self.den = den

    def _coerce(self, o):
        if isinstance(o, Scalar):
            if o.tower is not self.tower:
                raise ValueError("scalars from different towers")
            return o
        if isinstance(o, (int, Fraction, CRat)):
            return self.tower.const(o)
        return None

    def __add__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        tw = self.tower
        if self.den == o.den:
            return tw.make(self.num + o.num, self.den)
        if self.den.is_constant() or o.den.is_constant():
            return tw.make(self.num * o.den + o.num * self.den, self.den * o.den)
        g = self.den.gcd(o.den)
        a, b = self.den / g, o.den / g
        return tw.make(self.num * b + o.num * a, self.den * b)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.tower, -self.num, self.den)

    def __sub__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return self.tower.zero
        if o.den.is_one() and o.num.is_constant():
            if o.num.is_one():
                return self
            return Scalar(self.tower, self.num * o.num, self.den)
        if self.den.is_one() and self.num.is_constant():
            return o * self
        return self.tower.make(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        tw = self.tower
        a = self.num
        if a.is_zero():
            raise DivisionByZero("inverse of the zero element")
        mult = self.den
        degs = a.degrees()
        for idx, name in ((2, "rho"), (1, "x3"), (0, "I")):
            if degs[idx] == 0:
                continue
            a0, a1 = _split_linear(tw, a, name)
            conj = a0 - a1 * tw.gen[name]
            mult = mult * conj
            a = tw.reduce(a * conj)
            degs = a.degrees()
        return tw.make(mult, a)

    def __truediv__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inv() ** (-e)
        out, base = self.tower.one, self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a rational constant")
        q = self.num.leading_coefficient() if not self.num.is_zero() else flint.fmpq(0)
        q = q / self.den.leading_coefficient()
        return Fraction(int(q.p), int(q.q))

    def variables(self) -> set[str]:
        out = set()
        for p in (self.num, self.den):
            for nm, d in zip(self.tower.names, p.degrees()):
                if d:
                    out.add(nm)
        return out

    def depends_on(self, names) -> bool:
        return bool(self.variables() & set(names))

    def subs(self, values: Mapping[str, object]) -> "Scalar":
        """Substitute rational values (or ``Scalar``s) for ring variables."""
        tw = self.tower
        rat = {k: _fmpq(v) for k, v in values.items() if not isinstance(v, Scalar)}
        num = self.num.subs(rat) if rat else self.num
        den = self.den.subs(rat) if rat else self.den
        if den.is_zero():
            raise PoleAtPoint("denominator vanishes at the substituted values")
        out = tw.make(num, den)
        sym = {k: v for k, v in values.items() if isinstance(v, Scalar)}
        if sym:
            out = out.compose(sym)
        return out

    def compose(self, values: Mapping[str, "Scalar"]) -> "Scalar":
        """Substitute field elements for ring variables (exact, re-canonicalised)."""
        tw = self.tower

        def ev(p):
            acc = tw.zero
            for mono, c in p.terms():
                term = tw.const(Fraction(int(c.p), int(c.q)))
                rest = [0] * len(tw.names)
                for i, e in enumerate(mono):
                    if not e:
                        continue
                    nm = tw.names[i]
                    if nm in values:
                        term = term * values[nm] ** e
                    else:
                        rest[i] = e
                if any(rest):
                    term = term * Scalar(tw, tw.ctx.from_dict({tuple(rest): 1}), tw._one_p)
                acc = acc + term
            return acc

        return ev(self.num) / ev(self.den)

    def __repr__(self):
        if self.den.is_one():
            return f"Scalar({self.num})"
        return f"Scalar(({self.num})/({self.den}))"


class Derivation:
    """Derivation of the coefficient field fixed by its values on the chart
    variables ``x1, x2, p1, p2, s1, s2``.

    Values live in any module over the field: ``Scalar`` for partial
    derivatives, 1-form valued expressions for the connection.  The action on
    ``x3``, ``rho`` and the jets follows from the defining relations by the
    chain rule.
    """

    def __init__(self, tower: Tower, values: Mapping[str, object], zero):
        self.tower = tower
        self.zero = zero
        vals = {v: values[v] for v in FREE_VARS if v in values and not _is_zero(values[v])}
        cache = _tower_cache(tower)
        self.values = dict(vals)
        dx3 = zero
        for v in ("x1", "x2"):
            if v in vals:
                dx3 = dx3 + (-tower.var(v) * cache.inv_x3) * vals[v]
        drho = zero
        dss = zero
        for v, val in vals.items():
            if v in ("p1", "p2"):
                continue
            drho = drho + (cache.dY[v] * cache.inv_2rho) * val
            dss = dss + cache.dSS[v] * val
        self.values["x3"] = dx3
        self.values["rho"] = drho
        self.dSS = dss
        self._dss_zero = _is_zero(dss)

    def _value(self, name: str):
        if name in self.values:
            return self.values[name]
        jp = self.tower.jet_parts(name)
        if jp is None:
            return self.zero
        if self._dss_zero:
            return self.zero
        fname, j = jp
        if j + 1 > self.tower.jet_order:
            raise JetOverflow(f"derivative of {fname}^({j}) needs order {j + 1} > {self.tower.jet_order}")
        return self.tower.jet(fname, j + 1) * self.dSS

    def __call__(self, c: Scalar):
        tw = self.tower
        n, d = c.num, c.den
        if n.is_zero():
            return self.zero
        dn = n.degrees()
        dd = d.degrees()
        acc = self.zero
        d2 = None
        for i, name in enumerate(tw.names):
            if not dn[i] and not dd[i]:
                continue
            val = self._value(name)
            if _is_zero(val):
                continue
            if dd[i]:
                if d2 is None:
                    d2 = d * d
                coef = tw.make(n.derivative(i) * d - n * d.derivative(i), d2)
            else:
                coef = tw.make(n.derivative(i), d)
            if coef.is_zero():
                continue
            acc = acc + coef * val
        return acc


def _is_zero(v) -> bool:
    if isinstance(v, Scalar):
        return v.is_zero()
    iz = getattr(v, "is_zero", None)
    if iz is not None:
        return iz()
    return not v


def d_base(f: Scalar, v: str) -> Scalar:
    """Partial derivative in the chart variable ``v`` of ``x1, x2, p1, p2``."""
    if v not in BASE_VARS:
        raise ValueError(f"d_base differentiates in {BASE_VARS}, not {v!r}")
    tw = f.tower
    return Derivation(tw, {v: tw.one}, tw.zero)(f)


def d_fiber(f: Scalar, v: str) -> Scalar:
    """Partial derivative in ``s1`` or ``s2`` (chain rule through R and the jets)."""
    if v not in ("s1", "s2"):
        raise ValueError(f"d_fiber differentiates in s1, s2, not {v!r}")
    tw = f.tower
    return Derivation(tw, {v: tw.one}, tw.zero)(f)


# -- rational points on T*S^2 -------------------------------------------------


@dataclass(frozen=True)
class PhasePoint:
    """A rational point of T*S^2 from stereographic data ``(a, b)`` and a
    tangent vector ``c d/da + d d/db``."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    x: tuple
    p: tuple

    def base_values(self) -> dict[str, Fraction]:
        return {"x1": self.x[0], "x2": self.x[1], "x3": self.x[2], "p1": self.p[0], "p2": self.p[1]}


def sphere_point(a, b, c=0, d=0) -> PhasePoint:
    a, b, c, d = (Fraction(t) for t in (a, b, c, d))
    q = 1 + a * a + b * b
    x = (2 * a / q, 2 * b / q, (1 - a * a - b * b) / q)
    # partial derivatives of the stereographic map
    xa = (2 / q - 4 * a * a / q**2, -4 * a * b / q**2, -2 * a / q - 2 * a * (1 - a * a - b * b) / q**2)
    xb = (-4 * a * b / q**2, 2 / q - 4 * b * b / q**2, -2 * b / q - 2 * b * (1 - a * a - b * b) / q**2)
    p = tuple(c * u + d * w for u, w in zip(xa, xb))
    return PhasePoint(a, b, c, d, x, p)


def _rand_frac(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_point(rng: random.Random, bound: int = 9) -> PhasePoint:
    """Seeded point with ``x3 != 0`` (retries otherwise)."""
    while True:
        pt = sphere_point(*(_rand_frac(rng, bound) for _ in range(4)))
        if pt.x[2] != 0:
            return pt


def eval_base_at(f: Scalar, pt: PhasePoint) -> CRat:
    """Exact value of a base element (no s, rho or jets) at a point."""
    extra = f.variables() - set(BASE_VARS) - {"x3", "I"}
    if extra:
        raise ValueError(f"not a base element; depends on {sorted(extra)}")
    tw = f.tower
    vals = {k: _fmpq(v) for k, v in pt.base_values().items()}
    num = f.num.subs(vals)
    den = f.den.subs(vals)
    if den.is_zero():
        raise PoleAtPoint(f"pole at x={pt.x}, p={pt.p}")
    re = num.subs({"I": 0})
    im = (num - re) / tw.gen["I"] if not (num - re).is_zero() else tw._zero_p
    dv = den.leading_coefficient()

    def q(pp):
        if pp.is_zero():
            return Fraction(0)
        c = pp.leading_coefficient() / dv
        return Fraction(int(c.p), int(c.q))

    return CRat(q(re), q(im))


def vanishes_at(f: Scalar, pt: PhasePoint, fiber: Mapping[str, Fraction]) -> bool:
    """Probabilistic zero test: substitute the point and fiber values, keeping
    only ``I`` and ``rho`` symbolic (their coefficients must all vanish)."""
    vals = {k: _fmpq(v) for k, v in pt.base_values().items()}
    vals.update({k: _fmpq(v) for k, v in fiber.items()})
    den = f.den.subs(vals)
    if den.is_zero():
        raise PoleAtPoint(f"pole at x={pt.x}, p={pt.p}")
    return f.num.subs(vals).is_zero()


def fiber_sample(tower: Tower, rng: random.Random, bound: int = 9) -> dict[str, Fraction]:
    vals = {"s1": _rand_frac(rng, bound), "s2": _rand_frac(rng, bound)}
    for n in tower.jet_names:
        for j in range(tower.jet_order + 1):
            vals[f"{n}{j}"] = _rand_frac(rng, bound)
    return vals


# -- truncated nilpotent parameter ---------------------------------------------


class EpsPoly:
    """Polynomial in a nilpotent ``eps`` with ``eps**N = 0``; coefficients may
    be any ring elements (scalars, operator expressions)."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence, order: int):
        if order < 1:
            raise ValueError("truncation order must be positive")
        cs = list(coeffs)[:order]
        if not cs:
            raise ValueError("need at least the constant coefficient")
        zero = cs[0] * 0
        while len(cs) < order:
            cs.append(zero)
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def constant(cls, c, order: int) -> "EpsPoly":
        return cls([c], order)

    def _check(self, o: "EpsPoly"):
        if o.order != self.order:
            raise ValueError("mismatched truncation orders")

    def __add__(self, o):
        if not isinstance(o, EpsPoly):
            return EpsPoly([self.coeffs[0] + o, *self.coeffs[1:]], self.order)
        self._check(o)
        return EpsPoly([a + b for a, b in zip(self.coeffs, o.coeffs)], self.order)

    def __neg__(self):
        return EpsPoly([-a for a in self.coeffs], self.order)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not isinstance(o, EpsPoly):
            return EpsPoly([a * o for a in self.coeffs], self.order)
        self._check(o)
        out = []
        for n in range(self.order):
            acc = None
            for i in range(n + 1):
                t = self.coeffs[i] * o.coeffs[n - i]
                acc = t if acc is None else acc + t
            out.append(acc)
        return EpsPoly(out, self.order)

    def __rmul__(self, o):
        return EpsPoly([o * a for a in self.coeffs], self.order)

    def map(self, fn: Callable) -> "EpsPoly":
        """Apply an eps-linear map coefficientwise."""
        return EpsPoly([fn(a) for a in self.coeffs], self.order)

    def is_zero(self) -> bool:
        return all(_is_zero(a) for a in self.coeffs)

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def __repr__(self):
        return f"EpsPoly({list(self.coeffs)!r}, order={self.order})"

    @classmethod
    def exp(cls, g, order: int, one) -> "EpsPoly":
        """``sum_{n<N} (eps g)^n / n!``."""
        cs = [one]
        term = one
        for n in range(1, order):
            term = term * g * Fraction(1, n)
            cs.append(term)
        return cls(cs, order)

"""Independent brute-force representation used to cross-check the engine.

Here nothing is eliminated: ``s1..s3``, ``k1..k3`` and the six forms
``th1..th3, al1..al3`` are separate generators, the base point is a fixed
rational point of T*S^2, and words are normal ordered by repeatedly rewriting
adjacent pairs ``k_b s_c -> s_c k_b - (delta_bc - x_b x_c)``.  Only at the end
are the transversality relations imposed by substituting the third
components, which gives something comparable with the engine's normal form
evaluated at the same point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .scalars import PhasePoint, PoleAtPoint, Tower, _fmpq
from .weyl import OpExpr

__all__ = ["Ambient", "AmbientExpr", "to_eliminated", "engine_at_point", "oracle_3c"]

_ZERO3 = (0, 0, 0)


def _sign6(m1: int, m2: int) -> int:
    if m1 & m2:
        return 0
    swaps = 0
    for i in range(6):
        if m2 >> i & 1:
            swaps += bin(m1 >> (i + 1)).count("1")
    return -1 if swaps & 1 else 1


_SIGN6 = [[_sign6(a, b) for b in range(64)] for a in range(64)]


class Ambient:
    """Ambient algebra at one rational base point."""

    def __init__(self, pt: PhasePoint):
        self.pt = pt
        x = pt.x
        self.M = tuple(tuple((1 if b == c else 0) - x[b] * x[c] for c in range(3)) for b in range(3))
        self._reorder = lru_cache(maxsize=None)(self._reorder_impl)

    def _reorder_impl(self, kword: tuple, sword: tuple) -> tuple:
        """``k^kword s^sword`` as a tuple of ``(coef, s-exponents, k-exponents)``.

        Words are sorted letter tuples; the rightmost k is pushed through the
        s letters one adjacent swap at a time.
        """
        if not kword or not sword:
            return ((Fraction(1), _exps(sword), _exps(kword)),)
        b, rest_k = kword[-1], kword[:-1]
        # k_b s_{c1} ... s_{cn} = sum over the position of the contraction
        terms: dict = {}
        for i, c in enumerate(sword):
            m = self.M[b][c]
            if m:
                remaining = sword[:i] + sword[i + 1:]
                for coef, se, ke in self._reorder(rest_k, remaining):
                    _addterm(terms, (se, ke), -m * coef)
        # fully passed: rest_k * s^sword * k_b
        for coef, se, ke in self._reorder(rest_k, sword):
            ke2 = list(ke)
            ke2[b] += 1
            _addterm(terms, (se, tuple(ke2)), coef)
        return tuple((c, se, ke) for (se, ke), c in terms.items() if c)

    # -- elements ---------------------------------------------------------------------

    def const(self, q) -> "AmbientExpr":
        q = Fraction(q)
        return AmbientExpr(self, {(0, _ZERO3, _ZERO3): q} if q else {})

    def s(self, a: int) -> "AmbientExpr":
        e = [0, 0, 0]
        e[a] = 1
        return AmbientExpr(self, {(0, tuple(e), _ZERO3): Fraction(1)})

    def k(self, a: int) -> "AmbientExpr":
        e = [0, 0, 0]
        e[a] = 1
        return AmbientExpr(self, {(0, _ZERO3, tuple(e)): Fraction(1)})

    def theta(self, a: int) -> "AmbientExpr":
        return AmbientExpr(self, {(1 << a, _ZERO3, _ZERO3): Fraction(1)})

    def alpha(self, a: int) -> "AmbientExpr":
        return AmbientExpr(self, {(1 << (a + 3), _ZERO3, _ZERO3): Fraction(1)})


def _exps(word: tuple) -> tuple:
    e = [0, 0, 0]
    for c in word:
        e[c] += 1
    return tuple(e)


def _word(exps: tuple) -> tuple:
    return tuple(i for i in range(3) for _ in range(exps[i]))


def _addterm(d: dict, key, val):
    v = d.get(key, 0) + val
    if v:
        d[key] = v
    elif key in d:
        del d[key]


@dataclass
class AmbientExpr:
    amb: Ambient
    terms: dict  # (form mask, s exponents, k exponents) -> Fraction

    def _lift(self, o):
        if isinstance(o, AmbientExpr):
            return o
        if isinstance(o, (int, Fraction)):
            return self.amb.const(o)
        return None

    def __add__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.terms.items():
            _addterm(out, k, v)
        return AmbientExpr(self.amb, out)

    __radd__ = __add__

    def __neg__(self):
        return AmbientExpr(self.amb, {k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            o = Fraction(o)
            return AmbientExpr(self.amb, {k: v * o for k, v in self.terms.items()} if o else {})
        if not isinstance(o, AmbientExpr):
            return NotImplemented
        out: dict = {}
        for (m1, s1, k1), c1 in self.terms.items():
            for (m2, s2, k2), c2 in o.terms.items():
                sg = _SIGN6[m1][m2]
                if not sg:
                    continue
                for c, se, ke in self.amb._reorder(_word(k1), _word(s2)):
                    s_tot = tuple(a + b for a, b in zip(s1, se))
                    k_tot = tuple(a + b for a, b in zip(ke, k2))
                    _addterm(out, (m1 | m2, s_tot, k_tot), sg * c * c1 * c2)
        return AmbientExpr(self.amb, out)

    def __rmul__(self, o):
        if isinstance(o, (int, Fraction)):
            return self * o
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def parity_parts(self):
        ev = {k: v for k, v in self.terms.items() if not bin(k[0]).count("1") & 1}
        od = {k: v for k, v in self.terms.items() if bin(k[0]).count("1") & 1}
        return AmbientExpr(self.amb, ev), AmbientExpr(self.amb, od)


def ambient_comm(A: AmbientExpr, B: AmbientExpr) -> AmbientExpr:
    Ae, Ao = A.parity_parts()
    Be, Bo = B.parity_parts()
    return (Ae * B - B * Ae) + (Ao * Be - Be * Ao) + (Ao * Bo + Bo * Ao)


def to_eliminated(A: AmbientExpr) -> dict:
    """Impose ``x.s = x.k = x.theta = x.alpha = 0`` by substituting third components.

    Returns ``{(mask4, a, b): {(i, j): Fraction}}``: coefficient polynomials in
    ``s1, s2`` for each form monomial and k-word ``k1^a k2^b``.
    """
    x = A.amb.pt.x
    if x[2] == 0:
        raise PoleAtPoint("x3 vanishes at this point")
    a1, a2 = -x[0] / x[2], -x[1] / x[2]
    out: dict = {}
    for (mask, se, ke), c in A.terms.items():
        # expand s3^n, k3^m, th3, al3 into the eliminated generators
        spoly = {(se[0], se[1]): c}
        for _ in range(se[2]):
            spoly = _lin_mul2(spoly, a1, a2)
        kpoly = {(ke[0], ke[1]): Fraction(1)}
        for _ in range(ke[2]):
            kpoly = _lin_mul2(kpoly, a1, a2)
        # forms: th1 th2 th3 al1 al2 al3 (bits 0..5) -> th1 th2 al1 al2 (bits 0..3)
        fpoly = {0: Fraction(1)}
        for i in range(6):
            if not mask >> i & 1:
                continue
            if i in (0, 1):
                gens = ((1 << i, Fraction(1)),)
            elif i == 2:
                gens = ((1, a1), (2, a2))
            elif i in (3, 4):
                gens = ((1 << (i - 1), Fraction(1)),)
            else:
                gens = ((4, a1), (8, a2))
            new: dict = {}
            for fm, fc in fpoly.items():
                for g, gc in gens:
                    sg = _sign6(fm, g)
                    if sg:
                        _addterm(new, fm | g, sg * fc * gc)
            fpoly = new
        for fm, fc in fpoly.items():
            for (ka, kb), kc in kpoly.items():
                slot = out.setdefault((fm, ka, kb), {})
                for mono, sc in spoly.items():
                    _addterm(slot, mono, sc * kc * fc)
    return {k: v for k, v in out.items() if v}


def _lin_mul2(poly: dict, a1, a2) -> dict:
    """Multiply a polynomial in two commuting letters by ``a1*e1 + a2*e2``."""
    out: dict = {}
    for (i, j), c in poly.items():
        if a1:
            _addterm(out, (i + 1, j), c * a1)
        if a2:
            _addterm(out, (i, j + 1), c * a2)
    return out


def engine_at_point(E: OpExpr, pt: PhasePoint) -> dict:
    """Engine normal form with the base point substituted (s stays symbolic)."""
    tw = E.alg.tower
    vals = {k: _fmpq(v) for k, v in pt.base_values().items()}
    out = {}
    for key, c in E.terms.items():
        den = c.den.subs(vals)
        if den.is_zero():
            raise PoleAtPoint(f"pole at x={pt.x}")
        v = tw.make(c.num.subs(vals), den)
        if not v.is_zero():
            out[key] = v
    return out


def oracle_as_scalars(tw: Tower, elim: dict) -> dict:
    i1, i2 = tw.index["s1"], tw.index["s2"]
    n = len(tw.names)
    out = {}
    for key, poly in elim.items():
        d = {}
        for (i, j), c in poly.items():
            e = [0] * n
            e[i1], e[i2] = i, j
            d[tuple(e)] = _fmpq(c)
        v = tw.make(tw.ctx.from_dict(d))
        if not v.is_zero():
            out[key] = v
    return out


def agree(E: OpExpr, A: AmbientExpr) -> bool:
    """Engine expression ``E`` and ambient expression ``A`` coincide at ``A``'s point."""
    tw = E.alg.tower
    lhs = engine_at_point(E, A.amb.pt)
    rhs = oracle_as_scalars(tw, to_eliminated(A))
    if lhs.keys() != rhs.keys():
        return False
    return all(lhs[k] == rhs[k] for k in lhs)


def oracle_3c(build, pt: PhasePoint) -> AmbientExpr:
    """Evaluate ``build(ns)`` in the ambient representation at ``pt``."""
    from .identities import ambient_namespace

    return build(ambient_namespace(Ambient(pt)))

"""Graded Weyl algebra of the sphere fiber.

An ``OpExpr`` is a finite sum ``c * phi * k1^a k2^b`` where ``c`` is a
``Scalar`` (all s-dependence lives there), ``phi`` a monomial in the Grassmann
generators ``th1, th2, al1, al2`` and the k-word sits on the right.  Moving
``k_j`` to the right of a coefficient applies

    [k_j, c] = -sum_i M_ij dc/ds_i,     M_ij = delta_ij - x_i x_j,

which is ``[s^i, k_j] = delta_ij - x_i x_j`` at ``i hbar = 1``.  The two maps
``c -> [k_j, c]`` are commuting derivations, so the normal form is unique and
structural equality decides equality.

Third components are eliminated through the transversality relations
``x.s = x.k = x.theta = x.alpha = 0``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .scalars import CRat, Derivation, PoleAtOrigin, Scalar, Tower

__all__ = ["Algebra", "OpExpr", "VecOp", "cross", "dot", "form_degree", "graded_comm", "lo"]

# Grassmann generators in canonical order
FORM_NAMES = ("TH1", "TH2", "AL1", "AL2")
TH1, TH2, AL1, AL2 = 1, 2, 4, 8


def form_degree(mask: int) -> int:
    return bin(mask).count("1")


def _merge_sign(m1: int, m2: int) -> int:
    """Sign of ``phi_m1 * phi_m2`` rewritten in canonical order (0 if they overlap)."""
    if m1 & m2:
        return 0
    swaps = 0
    for i in range(4):
        if m2 >> i & 1:
            # generators of m1 with larger index must hop over this one
            swaps += form_degree(m1 >> (i + 1))
    return -1 if swaps & 1 else 1


_SIGN = [[_merge_sign(a, b) for b in range(16)] for a in range(16)]
_S_VARS = frozenset({"s1", "s2", "rho"})


class Algebra:
    """Context object: coefficient tower plus the fiber derivations."""

    def __init__(self, tower: Tower | None = None, jet_order: int = 3, classical: bool = False):
        self.tower = tower if tower is not None else Tower(jet_order)
        # classical=True drops [s, k] (the hbar -> 0 limit)
        self.classical = classical
        tw = self.tower
        x1, x2 = tw.var("x1"), tw.var("x2")
        self.M = ((1 - x1 * x1, -x1 * x2), (-x1 * x2, 1 - x2 * x2))
        # delta_j(c) = [k_j, c]
        self.delta = tuple(
            Derivation(tw, {"s1": -self.M[0][j], "s2": -self.M[1][j]}, tw.zero) for j in range(2)
        )
        jet_vars = {f"{n}{j}" for n in tw.jet_names for j in range(tw.jet_order + 1)}
        self._fiber_vars = _S_VARS | jet_vars
        self._fiber_idx = [i for i, nm in enumerate(tw.names) if nm in self._fiber_vars]
        self.zero = OpExpr(self, {})
        self.one = self.scalar(tw.one)
        self._vecs: dict[str, "VecOp"] = {}

    def __repr__(self):
        return f"Algebra({self.tower!r})"

    # -- constructors ----------------------------------------------------

    def scalar(self, c) -> "OpExpr":
        c = self.tower.const(c) if not isinstance(c, Scalar) else c
        if c.is_zero():
            return OpExpr(self, {})
        return OpExpr(self, {(0, 0, 0): c})

    def var(self, name: str) -> "OpExpr":
        return self.scalar(self.tower.var(name))

    def mono(self, mask: int = 0, a: int = 0, b: int = 0, c=None) -> "OpExpr":
        c = self.tower.one if c is None else self.tower.const(c)
        return OpExpr(self, {(mask, a, b): c})

    def k(self, i: int) -> "OpExpr":
        return self.mono(0, 1, 0) if i == 1 else self.mono(0, 0, 1)

    def theta(self, i: int) -> "OpExpr":
        return self.mono(TH1 if i == 1 else TH2)

    def alpha(self, i: int) -> "OpExpr":
        return self.mono(AL1 if i == 1 else AL2)

    def is_fiber_free(self, c: Scalar) -> bool:
        """True when ``c`` commutes with ``k`` (no s, rho or jet content)."""
        dn = c.num.degrees()
        dd = c.den.degrees()
        return not any(dn[i] or dd[i] for i in self._fiber_idx)

    def _third(self, e1: "OpExpr", e2: "OpExpr") -> "OpExpr":
        tw = self.tower
        ix3 = tw.x3.inv()
        return (-tw.var("x1") * ix3) * e1 + (-tw.var("x2") * ix3) * e2

    def vec(self, name: str) -> "VecOp":
        """Ambient vectors ``x, p, s, k, theta, alpha`` (third components eliminated)."""
        v = self._vecs.get(name)
        if v is not None:
            return v
        tw = self.tower
        if name == "x":
            v = VecOp(self.var("x1"), self.var("x2"), self.scalar(tw.x3))
        elif name == "p":
            v = VecOp(self.var("p1"), self.var("p2"), self.scalar(tw.p3))
        elif name == "s":
            v = VecOp(self.var("s1"), self.var("s2"), self.scalar(tw.s3))
        elif name in ("k", "theta", "alpha"):
            mk = {"k": self.k, "theta": self.theta, "alpha": self.alpha}[name]
            e1, e2 = mk(1), mk(2)
            v = VecOp(e1, e2, self._third(e1, e2))
        else:
            raise KeyError(name)
        self._vecs[name] = v
        return v

    # -- product -----------------------------------------------------------

    def _shift(self, c: Scalar, m: int, n: int, memo: dict) -> Scalar:
        key = (m, n)
        v = memo.get(key)
        if v is None:
            if n > 0:
                v = self.delta[1](self._shift(c, m, n - 1, memo))
            else:
                v = self.delta[0](self._shift(c, m - 1, 0, memo))
            memo[key] = v
        return v

    def mul(self, A: "OpExpr", B: "OpExpr") -> "OpExpr":
        if not A.terms or not B.terms:
            return self.zero
        acc: dict = {}
        cl = self.classical
        bterms = [(key, c, cl or self.is_fiber_free(c), {(0, 0): c}) for key, c in B.terms.items()]
        for (m1, a1, b1), c1 in A.terms.items():
            for (m2, a2, b2), c2, free, memo in bterms:
                sg = _SIGN[m1][m2]
                if not sg:
                    continue
                mask = m1 | m2
                if free or (a1 == 0 and b1 == 0):
                    _acc(acc, (mask, a1 + a2, b1 + b2), c1 * c2 if sg > 0 else -(c1 * c2))
                    continue
                for m in range(a1 + 1):
                    for n in range(b1 + 1):
                        d = self._shift(c2, m, n, memo)
                        if d.is_zero():
                            continue
                        w = comb(a1, m) * comb(b1, n) * sg
                        t = c1 * d
                        if w != 1:
                            t = t * w
                        _acc(acc, (mask, a1 - m + a2, b1 - n + b2), t)
        return OpExpr(self, _collect(acc))


def _acc(acc: dict, key, val: Scalar):
    lst = acc.get(key)
    if lst is None:
        acc[key] = [val]
    else:
        lst.append(val)


def _sum(vals):
    if len(vals) == 1:
        return vals[0]
    # group equal denominators first; cheap and keeps intermediate gcds small
    groups: dict = {}
    for v in vals:
        k = str(v.den)
        g = groups.get(k)
        groups[k] = v if g is None else g + v
    it = iter(groups.values())
    s = next(it)
    for v in it:
        s = s + v
    return s


def _collect(acc: dict) -> dict:
    out = {}
    for key, vals in acc.items():
        s = _sum(vals)
        if not s.is_zero():
            out[key] = s
    return out


class OpExpr:
    """Normal-ordered element of (Grassmann forms) x (fiber Weyl algebra)."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: Algebra, terms: Mapping):
        self.alg = alg
        self.terms = dict(terms)

    # -- ring structure ------------------------------------------------------

    def _lift(self, o) -> "OpExpr | None":
        if isinstance(o, OpExpr):
            return o
        if isinstance(o, (int, Fraction, CRat, Scalar)):
            return self.alg.scalar(o)
        return None

    def __add__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        if not self.terms:
            return o
        acc: dict = {}
        for src in (self.terms, o.terms):
            for k, c in src.items():
                _acc(acc, k, c)
        return OpExpr(self.alg, _collect(acc))

    __radd__ = __add__

    def __neg__(self):
        return OpExpr(self.alg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "OpExpr":
        """Left multiplication by a commuting coefficient."""
        c = self.alg.tower.const(c) if not isinstance(c, Scalar) else c
        if c.is_zero():
            return self.alg.zero
        out = {}
        for k, v in self.terms.items():
            t = c * v
            if not t.is_zero():
                out[k] = t
        return OpExpr(self.alg, out)

    def __mul__(self, o):
        if isinstance(o, VecOp):
            return NotImplemented
        if isinstance(o, (int, Fraction)):
            return self.scale(o)
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return self.alg.mul(self, o)

    def __rmul__(self, o):
        if isinstance(o, (int, Fraction, CRat, Scalar)):
            return self.scale(o)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = self.alg.one
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        if self.terms.keys() != o.terms.keys():
            return False
        return all(c == o.terms[k] for k, c in self.terms.items())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    # -- grading -------------------------------------------------------------

    def form_degrees(self) -> set[int]:
        return {form_degree(m) for (m, _, _) in self.terms}

    def part(self, degree: int) -> "OpExpr":
        return OpExpr(self.alg, {k: c for k, c in self.terms.items() if form_degree(k[0]) == degree})

    def parity_parts(self):
        even = {k: c for k, c in self.terms.items() if not form_degree(k[0]) & 1}
        odd = {k: c for k, c in self.terms.items() if form_degree(k[0]) & 1}
        return OpExpr(self.alg, even), OpExpr(self.alg, odd)

    def form_coeff(self, mask: int) -> "OpExpr":
        """Operator coefficient of the form monomial ``mask``."""
        return OpExpr(self.alg, {(0, a, b): c for (m, a, b), c in self.terms.items() if m == mask})

    def kword_coeff(self, a: int = 0, b: int = 0) -> dict:
        return {m: c for (m, aa, bb), c in self.terms.items() if (aa, bb) == (a, b)}

    def max_kdegree(self) -> int:
        return max((a + b for (_, a, b) in self.terms), default=0)

    def map_coeffs(self, fn) -> "OpExpr":
        out = {}
        for k, c in self.terms.items():
            v = fn(c)
            if not v.is_zero():
                out[k] = v
        return OpExpr(self.alg, out)

    def scalar_value(self) -> Scalar:
        """The coefficient if ``self`` is a pure scalar (raises otherwise)."""
        if not self.terms:
            return self.alg.tower.zero
        if set(self.terms) != {(0, 0, 0)}:
            raise ValueError("not a scalar expression")
        return self.terms[(0, 0, 0)]

    def is_scalar(self) -> bool:
        return set(self.terms) <= {(0, 0, 0)}

    def size(self) -> int:
        return len(self.terms)

    def __repr__(self):
        from .lang import pretty

        return f"OpExpr({pretty(self)})"


def graded_comm(A: OpExpr, B: OpExpr) -> OpExpr:
    """``[A, B] = AB - (-1)^{|A||B|} BA`` with Koszul signs by form degree."""
    Ae, Ao = A.parity_parts()
    Be, Bo = B.parity_parts()
    out = A.alg.zero
    if Ae and B:
        out = out + (Ae * B - B * Ae)
    if Ao and Be:
        out = out + (Ao * Be - Be * Ao)
    if Ao and Bo:
        out = out + (Ao * Bo + Bo * Ao)
    return out


def lo(A: OpExpr) -> Scalar:
    """Leading order: coefficient of the empty form and k-word at ``s = 0, R = 1``."""
    tw = A.alg.tower
    c = A.terms.get((0, 0, 0))
    if c is None:
        return tw.zero
    num = c.num.subs({"s1": 0, "s2": 0})
    den = c.den.subs({"s1": 0, "s2": 0})
    if den.is_zero():
        raise PoleAtOrigin("coefficient has a pole at s = 0")
    a0 = num.subs({"rho": 0})
    a1 = (num - a0) / tw.gen["rho"] if not (num - a0).is_zero() else a0 * 0
    # jets evaluated at s^2 = 0 stay symbolic
    return tw.make(a0 + a1 * tw.gen["x3"], den)


class VecOp:
    """Triple of ``OpExpr`` standing for an ambient 3-vector."""

    __slots__ = ("c",)

    def __init__(self, c1: OpExpr, c2: OpExpr, c3: OpExpr):
        self.c = (c1, c2, c3)

    @property
    def alg(self) -> Algebra:
        return self.c[0].alg

    def __getitem__(self, i: int) -> OpExpr:
        return self.c[i]

    def __iter__(self):
        return iter(self.c)

    def __add__(self, o: "VecOp"):
        if not isinstance(o, VecOp):
            return NotImplemented
        return VecOp(*(a + b for a, b in zip(self.c, o.c)))

    def __sub__(self, o: "VecOp"):
        if not isinstance(o, VecOp):
            return NotImplemented
        return VecOp(*(a - b for a, b in zip(self.c, o.c)))

    def __neg__(self):
        return VecOp(*(-a for a in self.c))

    def __mul__(self, o):
        """Componentwise right multiplication by an operator or scalar."""
        if isinstance(o, VecOp):
            return NotImplemented
        return VecOp(*(a * o for a in self.c))

    def __rmul__(self, o):
        if isinstance(o, OpExpr):
            return VecOp(*(o * a for a in self.c))
        return VecOp(*(a.scale(o) if isinstance(o, (Scalar, int, Fraction)) else o * a for a in self.c))

    def __eq__(self, o):
        if not isinstance(o, VecOp):
            return NotImplemented
        return all(a == b for a, b in zip(self.c, o.c))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.c)

    def dot(self, o: "VecOp") -> OpExpr:
        return dot(self, o)

    def cross(self, o: "VecOp") -> "VecOp":
        return cross(self, o)

    def map(self, fn) -> "VecOp":
        return VecOp(*(fn(a) for a in self.c))

    def __repr__(self):
        return f"VecOp{self.c!r}"


def dot(A: VecOp, B: VecOp) -> OpExpr:
    return A[0] * B[0] + A[1] * B[1] + A[2] * B[2]


def cross(A: VecOp, B: VecOp) -> VecOp:
    return VecOp(
        A[1] * B[2] - A[2] * B[1],
        A[2] * B[0] - A[0] * B[2],
        A[0] * B[1] - A[1] * B[0],
    )


def vsum(items: Iterable[OpExpr], alg: Algebra) -> OpExpr:
    out = alg.zero
    for t in items:
        out = out + t
    return out

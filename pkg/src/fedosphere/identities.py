"""Catalogue of vector and commutator identities on T*S^2.

Each identity is written once against a small namespace (vectors ``x, p, s,
k, theta, alpha``, derived ``z``, ``omt`` and a graded commutator) so it can
be evaluated both by the engine and by the ambient oracle.  Identities that
need the connection are engine-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .oracle import Ambient, ambient_comm

__all__ = [
    "CATALOG",
    "Identity",
    "Namespace",
    "ambient_namespace",
    "check_identity",
    "literal_ordering_offsets",
    "engine_namespace",
    "oracle_sides",
    "vcross",
    "vdot",
]


# -- generic vector helpers (tuples of algebra elements) --------------------------------


def vdot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def vcross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def lmul(c, v):
    """``c * v`` with ``c`` on the left of every component."""
    return tuple(c * a for a in v)


def rmul(v, c):
    return tuple(a * c for a in v)


def qmul(q, v):
    return tuple(a * Fraction(q) for a in v)


def eps(a: int, b: int, c: int) -> int:
    return (a - b) * (b - c) * (c - a) // 2


@dataclass
class Namespace:
    x: tuple
    p: tuple
    s: tuple
    k: tuple
    theta: tuple
    alpha: tuple
    one: object
    zero: object
    comm: Callable
    # engine-only extras
    extra: dict = field(default_factory=dict)

    @property
    def z(self):
        return vsub(self.p, vcross(self.x, self.k))

    @property
    def omt(self):
        return vdot(self.x, vcross(self.theta, self.theta)) * Fraction(1, 2)

    @property
    def ss(self):
        return vdot(self.s, self.s)

    @property
    def r0(self):
        third = Fraction(1, 3)
        return (vdot(self.k, self.theta) * self.ss - vdot(self.k, self.s) * vdot(self.s, self.theta)) * third


def engine_namespace(frame, fed=None) -> Namespace:
    from .weyl import graded_comm

    a = frame.alg
    extra = {"frame": frame, "fed": fed}
    return Namespace(
        x=tuple(frame.x),
        p=tuple(frame.p),
        s=tuple(frame.s),
        k=tuple(frame.k),
        theta=tuple(frame.theta),
        alpha=tuple(frame.alpha),
        one=a.one,
        zero=a.zero,
        comm=graded_comm,
        extra=extra,
    )


def ambient_namespace(amb: Ambient) -> Namespace:
    pt = amb.pt
    x = tuple(amb.const(c) for c in pt.x)
    p = tuple(amb.const(c) for c in pt.p)
    return Namespace(
        x=x,
        p=p,
        s=tuple(amb.s(i) for i in range(3)),
        k=tuple(amb.k(i) for i in range(3)),
        theta=tuple(amb.theta(i) for i in range(3)),
        alpha=tuple(amb.alpha(i) for i in range(3)),
        one=amb.const(1),
        zero=amb.const(0),
        comm=ambient_comm,
    )


@dataclass(frozen=True)
class Identity:
    id: str
    tag: str
    text: str
    build: Callable  # Namespace -> list of (label, lhs, rhs)
    oracle: bool = True


def _pairs(label, lhs, rhs):
    return [(f"{label}[{i + 1}]", l, r) for i, (l, r) in enumerate(zip(lhs, rhs))]


# -- the identities -------------------------------------------------------------------------


def _dp(ns):
    fr = ns.extra["frame"]
    Dp = tuple(fr.D(fr.p))
    Dx = tuple(fr.D(fr.x))
    out = _pairs("dp", Dp, vsub(vcross(ns.alpha, ns.x), vcross(ns.p, ns.theta)))
    out += _pairs("x cross dp", vcross(ns.x, Dp), ns.alpha)
    out += _pairs("x cross dx", vcross(ns.x, Dx), ns.theta)
    return out


def _thth(ns):
    out = []
    for a in range(3):
        for b in range(3):
            rhs = ns.zero
            for c in range(3):
                e = eps(a, b, c)
                if e:
                    rhs = rhs + ns.omt * ns.x[c] * e
            out.append((f"th{a + 1}th{b + 1}", ns.theta[a] * ns.theta[b], rhs))
    return out


def _thth_half(ns):
    tt = vcross(ns.theta, ns.theta)
    out = []
    for a in range(3):
        for b in range(3):
            rhs = ns.zero
            for c in range(3):
                e = eps(a, b, c)
                if e:
                    rhs = rhs + tt[c] * Fraction(e, 2)
            out.append((f"th{a + 1}th{b + 1}", ns.theta[a] * ns.theta[b], rhs))
    return out


def _zx(ns):
    return _pairs("z cross x", vcross(ns.z, ns.x), vsub(vcross(ns.p, ns.x), ns.k))


def _triples(ns):
    return (("k,s,z", ns.k, ns.s, ns.z), ("s,k,k", ns.s, ns.k, ns.k), ("z,k,s", ns.z, ns.k, ns.s))


def _bac_left(ns):
    out = []
    for name, v, w, u in _triples(ns):
        comps = []
        for i in range(3):
            acc = ns.zero
            for a in range(3):
                acc = acc + v[a] * w[i] * u[a]
            comps.append(acc)
        rhs = vsub(tuple(comps), tuple(v[i] * vdot(w, u) for i in range(3)))
        out += _pairs(f"(v x w) x u ({name})", vcross(vcross(v, w), u), rhs)
    return out


def _bac_right(ns):
    out = []
    for name, v, w, u in _triples(ns):
        comps = []
        for i in range(3):
            acc = ns.zero
            for a in range(3):
                acc = acc + v[a] * w[i] * u[a]
            comps.append(acc)
        rhs = vsub(tuple(comps), tuple(vdot(v, w) * u[i] for i in range(3)))
        out += _pairs(f"v x (w x u) ({name})", vcross(v, vcross(w, u)), rhs)
    return out


def _form_pair(ns):
    out = []
    pairs = (("s,s", ns.s, ns.s), ("s,k", ns.s, ns.k), ("k,s", ns.k, ns.s), ("z,k", ns.z, ns.k), ("k,z", ns.k, ns.z))
    for name, v, w in pairs:
        lhs = vdot(v, ns.theta) * vdot(vcross(ns.x, w), ns.theta)
        out.append((name, lhs, ns.omt * vdot(v, w)))
    return out


def _transverse(ns):
    xs = vcross(ns.x, ns.s)
    out = []
    for name, v, w in (("s,k", ns.s, ns.k), ("k,s", ns.k, ns.s), ("k,k", ns.k, ns.k), ("s,xs", ns.s, xs)):
        vw = vcross(v, w)
        out += _pairs(name, vw, rmul(ns.x, vdot(vw, ns.x)))
    return out


def _zxs(ns):
    xs = vcross(ns.x, ns.s)
    return [("z.(x cross s)", vdot(ns.z, xs), vdot(ns.p, xs) - vdot(ns.k, ns.s))]


def _ss_xks(ns):
    return [("[s^2,(x cross k).s]", ns.comm(ns.ss, vdot(vcross(ns.x, ns.k), ns.s)), ns.zero)]


def _shift(ns, max_degree: int = 3):
    t = vdot(ns.k, ns.s)
    out = []
    for deg in range(max_degree + 1):
        ft = ns.one
        ft1 = ns.one
        for _ in range(deg):
            ft = ft * t
            ft1 = ft1 * (t + ns.one)
        for a in range(3):
            out.append((f"s{a + 1} t^{deg}", ns.s[a] * ft, ft1 * ns.s[a]))
    # a mixed polynomial of degree 3
    f = lambda u: u * u * u * 2 - u * u * Fraction(1, 3) + u * 5 + ns.one * Fraction(7, 2)  # noqa: E731
    for a in range(3):
        out.append((f"s{a + 1} f(t)", ns.s[a] * f(t), f(t + ns.one) * ns.s[a]))
    return out


def _r0_s(ns):
    rhs = qmul(Fraction(1, 3), vsub(lmul(vdot(ns.s, ns.theta), ns.s), lmul(ns.ss, ns.theta)))
    return _pairs("[r0,s]", tuple(ns.comm(ns.r0, c) for c in ns.s), rhs)


def _r0_sth(ns):
    return [("[r0,s.th]", ns.comm(ns.r0, vdot(ns.s, ns.theta)), ns.zero)]


def _r0_ss(ns):
    return [
        ("[r0,s^2]", ns.comm(ns.r0, ns.ss), ns.zero),
        ("[z.s,s^2]", ns.comm(vdot(ns.z, ns.s), ns.ss), ns.zero),
    ]


def _t_sym(ns):
    """``t`` in symmetric ordering, ``(k.s + s.k)/2 = k.s + 1``."""
    return (vdot(ns.k, ns.s) + vdot(ns.s, ns.k)) * Fraction(1, 2)


def _r0_k(ns, t=None):
    t = _t_sym(ns) if t is None else t
    kth = vdot(ns.k, ns.theta)
    sth = vdot(ns.s, ns.theta)
    rhs = qmul(
        Fraction(1, 3),
        vsub(vsub(qmul(2, rmul(ns.s, kth)), rmul(ns.theta, t)), lmul(sth, ns.k)),
    )
    return _pairs("[r0,k]", tuple(ns.comm(ns.r0, c) for c in ns.k), rhs)


def _r0_z(ns, t=None):
    t = _t_sym(ns) if t is None else t
    kth = vdot(ns.k, ns.theta)
    sth = vdot(ns.s, ns.theta)
    xk = vcross(ns.x, ns.k)
    xs = vcross(ns.x, ns.s)
    rhs = qmul(
        Fraction(1, 3),
        vsub(vsub(lmul(sth, xk), rmul(vcross(ns.theta, ns.x), t)), qmul(2, rmul(xs, kth))),
    )
    return _pairs("[r0,z]", tuple(ns.comm(ns.r0, c) for c in ns.z), rhs)


def _dtilde(ns):
    fed = ns.extra["fed"]
    fr = ns.extra["frame"]
    return fed.Dtilde(fed.build_r(Fraction(-1, 3), 1, 0)), fr


def _dt_s(ns):
    Dt, fr = _dtilde(ns)
    tw = fr.tower
    iss = fr.alg.scalar(tw.SS.inv())
    xs = vcross(ns.x, ns.s)
    sth = vdot(ns.s, ns.theta)
    xsth = vdot(xs, ns.theta)
    rhs = vsub(
        vsub(vcross(ns.theta, ns.s), rmul(ns.s, (ns.one + iss) * sth)),
        rmul(xs, iss * xsth),
    )
    return _pairs("D~s", tuple(Dt(c) for c in ns.s), rhs)


def _dt_x(ns):
    Dt, fr = _dtilde(ns)
    tw = fr.tower
    iss = fr.alg.scalar(tw.SS.inv())
    xs = vcross(ns.x, ns.s)
    sth = vdot(ns.s, ns.theta)
    xsth = vdot(xs, ns.theta)
    txx = vcross(ns.theta, ns.x)
    corrected = vsub(rmul(ns.s, iss * xsth), rmul(xs, iss * sth))
    out = _pairs("D~x = Dx", tuple(Dt(c) for c in ns.x), tuple(fr.D(c) for c in ns.x))
    out += _pairs("Dx = th x x", tuple(fr.D(c) for c in ns.x), txx)
    out += _pairs("th x x expansion", txx, corrected)
    return out


def literal_ordering_offsets(frame, fed=None):
    """lhs minus rhs of the ``[r0,k]``, ``[r0,z]`` and ``D~z`` displays read with
    ``t = k.s`` and vectors left of their coefficients.

    Each offset is a pure hbar-order term: ``-theta/3``, ``-(theta cross x)/3``
    and ``x cross theta``.
    """
    ns = engine_namespace(frame, fed)
    t = vdot(ns.k, ns.s)
    out = {}
    for name, pairs in (
        ("r0k", _r0_k(ns, t)),
        ("r0z", _r0_z(ns, t)),
        ("Dtz", _dt_z(ns, vectors_left=True)),
    ):
        out[name] = tuple(lhs - rhs for _, lhs, rhs in pairs)
    return out


def printed_dtilde_x_residual(frame):
    """The expansion of ``theta cross x`` as printed (no ``1/s^2`` on its second term) minus ``theta cross x``."""
    ns = engine_namespace(frame)
    iss = frame.alg.scalar(frame.tower.SS.inv())
    xs = vcross(ns.x, ns.s)
    sth = vdot(ns.s, ns.theta)
    xsth = vdot(xs, ns.theta)
    printed = vsub(rmul(ns.s, iss * xsth), rmul(xs, sth))
    return vsub(printed, vcross(ns.theta, ns.x))


def _dt_z(ns, vectors_left=False):
    Dt, fr = _dtilde(ns)
    tw = fr.tower
    iss = fr.alg.scalar(tw.SS.inv())
    xs = vcross(ns.x, ns.s)
    sth = vdot(ns.s, ns.theta)
    xsth = vdot(xs, ns.theta)
    zs = vdot(ns.z, ns.s)
    zxs = vdot(ns.z, xs)
    # operator coefficients stand left of the vectors s and x cross s
    place = rmul if vectors_left else (lambda v, c: lmul(c, v))
    rhs = vadd(
        vadd(vcross(ns.theta, ns.z), place(ns.s, (zs * sth - zxs * xsth) * iss)),
        place(xs, zxs * sth * iss * 2),
    )
    return _pairs("D~z", tuple(Dt(c) for c in ns.z), rhs)


CATALOG: tuple[Identity, ...] = (
    Identity("appC-01", "appC-dp", "dp = alpha x x - p x theta", _dp, oracle=False),
    Identity("appC-02", "appC-thth", "theta^a theta^b = omt eps^abc x_c", _thth),
    Identity("appC-03", "appC-thth", "theta^a theta^b = (1/2) eps^abc (theta x theta)_c", _thth_half),
    Identity("appC-04", "appC-zx", "z x x = p x x - k", _zx),
    Identity("appC-05", "appC-bac", "(v x w) x u = v^a w u^a - v (w.u)", _bac_left),
    Identity("appC-06", "appC-bac", "v x (w x u) = v^a w u^a - (v.w) u", _bac_right),
    Identity("appC-07", "appC-formpair", "(v.theta)((x x w).theta) = omt (v.w)", _form_pair),
    Identity("appC-08", "appC-transverse", "v x w = ((v x w).x) x for transverse v, w", _transverse),
    Identity("appC-09", "appC-zxs", "z.(x x s) = p.(x x s) - k.s", _zxs),
    Identity("appC-10", "appC-ss-xks", "[s^2, (x x k).s] = 0", _ss_xks),
    Identity("appC-11", "appC-shift", "s_a f(k.s) = f(k.s + 1) s_a, deg f <= 3", _shift),
    Identity("appC-12", "appC-r0s", "[r0, s] = (1/3)((s.theta) s - s^2 theta)", _r0_s),
    Identity("appC-13", "appC-r0sth", "[r0, s.theta] = 0", _r0_sth),
    Identity("appC-14", "appC-r0ss", "[r0, s^2] = 0 = [z.s, s^2]", _r0_ss),
    Identity("appC-15", "appC-r0k", "[r0, k] = (1/3)(2 s (k.theta) - theta t - (s.theta) k), t symmetric", _r0_k),
    Identity("appC-16", "appC-r0z", "[r0, z] = (1/3)((s.theta) x x k - (theta x x) t - 2 (x x s)(k.theta)), t symmetric", _r0_z),
    Identity("appC-17", "appC-Dts", "D~s expansion", _dt_s, oracle=False),
    Identity("appC-18", "appC-Dtx", "D~x = Dx = theta x x expansion", _dt_x, oracle=False),
    Identity("appC-19", "appC-Dtz", "D~z expansion, coefficients left of s and x x s", _dt_z, oracle=False),
)


def check_identity(ident: Identity, ns: Namespace) -> list:
    """``[(label, ok)]`` for every component of one identity."""
    out = []
    for label, lhs, rhs in ident.build(ns):
        out.append((label, (lhs - rhs).is_zero()))
    return out


def oracle_sides(ident: Identity, ns: Namespace) -> list:
    """All left and right sides, for comparison between backends."""
    sides = []
    for label, lhs, rhs in ident.build(ns):
        sides.append((label + ":lhs", lhs))
        sides.append((label + ":rhs", rhs))
    return sides

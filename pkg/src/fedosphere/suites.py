"""Registry of verification suites.

Each check is a ``CheckSpec`` whose ``run(ctx)`` returns either ``Vanish``
(objects that must reduce to zero) or ``Expect`` (a decided boolean).  In
symbolic mode ``Vanish`` is decided by canonical form; in points mode every
coefficient is evaluated at seeded rational points (a probabilistic cross-check).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .connection import levi_civita
from .fedosov import Fedosov, FnSpec
from .report import Check, SuiteResult, VerificationReport
from .scalars import EpsPoly, PoleAtPoint, Scalar, fiber_sample, random_point, vanishes_at
from .weyl import OpExpr, VecOp, cross, dot, graded_comm

__all__ = ["SUITES", "CheckSpec", "Context", "Expect", "Vanish", "all_check_ids", "run_suites", "broken_probe"]


@dataclass
class Vanish:
    objs: list
    label: str = ""


@dataclass
class Expect:
    ok: bool
    detail: str = ""
    skip: bool = False


@dataclass
class CheckSpec:
    id: str
    tag: str
    run: Callable


@dataclass
class Context:
    """Lazily shared engine objects for one run."""

    jet_order: int = 3
    seed: int = 0
    points: int = 20
    mode: str = "symbolic"
    _cache: dict = field(default_factory=dict)

    def get(self, key: str, build: Callable):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def fed(self) -> Fedosov:
        return self.get("fed", lambda: Fedosov(jet_order=self.jet_order))

    @property
    def frame(self):
        return self.fed.frame

    @property
    def obs(self):
        from .observables import Observables

        return self.get("obs", lambda: Observables(self.fed))

    @property
    def rsol(self) -> OpExpr:
        return self.obs.r

    def sample_points(self) -> list:
        rng = random.Random(self.seed)
        tw = self.fed.tower
        return [(random_point(rng), fiber_sample(tw, rng)) for _ in range(self.points)]


# -- deciding ---------------------------------------------------------------------------------


def _flatten(o) -> list:
    if isinstance(o, (VecOp, tuple, list)):
        return [y for x in o for y in _flatten(x)]
    if isinstance(o, EpsPoly):
        return [y for x in o.coeffs for y in _flatten(x)]
    if isinstance(o, dict):
        return [y for x in o.values() for y in _flatten(x)]
    return [o]


def _coeffs(o) -> list | None:
    if isinstance(o, OpExpr):
        return list(o.terms.values())
    if isinstance(o, Scalar):
        return [o]
    return None


def _size(o) -> int:
    if isinstance(o, OpExpr):
        return o.size()
    if hasattr(o, "terms"):
        return len(o.terms)
    return 0 if o.is_zero() else 1


def decide(result, ctx: Context) -> tuple[str, str]:
    if isinstance(result, Expect):
        if result.skip:
            return "skip", result.detail
        return ("pass" if result.ok else "fail"), result.detail
    objs = _flatten(result.objs)
    if ctx.mode == "points":
        pts = ctx.get("points", ctx.sample_points)
        bad = 0
        for o in objs:
            cs = _coeffs(o)
            if cs is None:
                bad += not o.is_zero()
                continue
            for c in cs:
                for pt, fib in pts:
                    try:
                        if not vanishes_at(c, pt, fib):
                            bad += 1
                            break
                    except PoleAtPoint:
                        continue
        if bad:
            return "fail", f"{bad} coefficient(s) nonzero at sampled points {result.label}".rstrip()
        return "pass", f"vanishes at {len(pts)} points {result.label}".rstrip()
    nonzero = [o for o in objs if not o.is_zero()]
    if nonzero:
        terms = sum(_size(o) for o in nonzero)
        return "fail", f"residual nonzero: {len(nonzero)} of {len(objs)} parts, {terms} terms {result.label}".rstrip()
    return "pass", f"exact zero ({len(objs)} parts) {result.label}".rstrip()


def run_check(spec: CheckSpec, ctx: Context) -> Check:
    t0 = time.perf_counter()
    try:
        status, detail = decide(spec.run(ctx), ctx)
    except Exception as exc:  # a crashing check is a failing check
        status, detail = "fail", f"error: {type(exc).__name__}: {exc}"
    ms = (time.perf_counter() - t0) * 1000.0
    return Check(spec.id, spec.tag, status, detail, round(ms, 3))


# -- connection ---------------------------------------------------------------------------------


def _connection() -> list:
    third = Fraction(1, 3)

    def d2k(ctx):
        F = ctx.frame
        s, k, x, th, al = F.s, F.k, F.x, F.theta, F.alpha
        rhs = F.omt * cross(x, k) + third * (al * dot(s, th) + dot(s, al) * th - 2 * F.omega * s)
        return Vanish([F.D2(k) - rhs])

    def dk3(ctx):
        F = ctx.frame
        th, x, s, k, p = F.theta, F.x, F.s, F.k, F.p
        rhs = cross(th, k) - Fraction(2, 3) * (cross(th, x) * dot(p, s)) + third * (dot(p, th) * cross(s, x))
        return Vanish([F.D(k)[2] - rhs[2]])

    def d2f(name):
        def run(ctx):
            a = ctx.frame.alg
            tw = a.tower
            f = {
                "x1": tw.var("x1"),
                "p2": tw.var("p2"),
                "x3": tw.x3,
                "p3": tw.p3,
                "mixed": tw.var("x1") * tw.var("p1") / (tw.x3 + 2) + tw.var("x2") ** 3,
            }[name]
            return Vanish([ctx.frame.D2(a.scalar(f))])

        return run

    def leibniz(ctx):
        fed = ctx.fed
        D = ctx.frame.D
        g = list(fed.generators().values()) + [ctx.frame.theta[0], ctx.frame.alpha[1]]
        return Vanish([D(A * B) - (D(A) * B + (A * D(B) if not (A.form_degrees() & {1}) else -(A * D(B)))) for A in g for B in g])

    specs = [
        CheckSpec("conn.D2x", "D2x", lambda c: Vanish([c.frame.D2(c.frame.x)])),
        CheckSpec("conn.D2p", "D2p", lambda c: Vanish([c.frame.D2(c.frame.p)])),
        CheckSpec(
            "conn.D2s", "D2theta", lambda c: Vanish([c.frame.D2(c.frame.s) - c.frame.omt * cross(c.frame.x, c.frame.s)])
        ),
        CheckSpec("conn.D2k", "D2alpha", d2k),
        CheckSpec("conn.Dk3", "Dalpha", dk3),
        CheckSpec("conn.Domega", "omega", lambda c: Vanish([c.frame.D(c.frame.omega)])),
        CheckSpec("conn.D2omega", "omega", lambda c: Vanish([c.frame.D2(c.frame.omega)])),
        CheckSpec("conn.Dxx", "constraints", lambda c: Vanish([c.frame.D(dot(c.frame.x, c.frame.x))])),
        CheckSpec("conn.Dxp", "constraints", lambda c: Vanish([c.frame.D(dot(c.frame.x, c.frame.p))])),
        CheckSpec("conn.DSS", "preserved", lambda c: Vanish([c.frame.D(c.frame.SS)])),
        CheckSpec("conn.DR", "preserved", lambda c: Vanish([c.frame.D(c.frame.R)])),
        CheckSpec("conn.leibniz", "D", leibniz),
    ]
    for nm in ("x1", "p2", "x3", "p3", "mixed"):
        specs.append(CheckSpec(f"conn.D2f.{nm}", "D2f", d2f(nm)))
    return specs


# -- omega --------------------------------------------------------------------------------------


def _omega() -> list:
    third = Fraction(1, 3)

    def om_s(ctx):
        fr = ctx.frame
        Om = ctx.fed.build_Omega()
        return Vanish([graded_comm(Om, fr.s[i]) - (fr.omt * cross(fr.x, fr.s))[i] for i in range(3)])

    def om_k(ctx):
        fr = ctx.frame
        Om = ctx.fed.build_Omega()
        s, k, x, th, al = fr.s, fr.k, fr.x, fr.theta, fr.alpha
        rhs = third * (al * dot(s, th) + dot(s, al) * th - 2 * fr.omega * s) + cross(x, k) * fr.omt
        return Vanish([graded_comm(Om, k[i]) - rhs[i] for i in range(3)])

    def square(ctx):
        lhs, rhs = ctx.fed.square_identity()
        return Vanish([lhs - rhs])

    return [
        CheckSpec("omega.comm_s", "Omega", om_s),
        CheckSpec("omega.comm_k", "Omega", om_k),
        CheckSpec("omega.square", "appA-square", square),
        CheckSpec("omega.D_sa", "cond-Dhat", lambda c: Vanish([c.frame.D(c.fed.sa)])),
    ]


# -- r ------------------------------------------------------------------------------------------


def _r() -> list:
    m13, m112 = Fraction(-1, 3), Fraction(-1, 12)

    def g_cond(f, expect):
        return lambda c: Expect(
            c.fed.g_condition(f).value == c.fed.tower.const(expect), f"g({f}) = {c.fed.g_condition(f).value}"
        )

    def residual(f, g, h=0):
        return lambda c: Vanish([c.fed.residual_r(c.fed.build_r(f, g, h))])

    def probe(ctx):
        fed = ctx.fed
        f = FnSpec.rational(fed.tower, [0, 1], label="SS")
        return Vanish([fed.residual_r(fed.build_r(f, fed.g_condition(f), 0))], "f = SS")

    def jet_probe(ctx):
        fed = ctx.fed
        return Vanish([fed.residual_r(fed.build_r("f", fed.g_condition("f"), "h"))], "jet f, jet h")

    def h_indep(ctx):
        fed = ctx.fed
        return Vanish([fed.residual_r(fed.build_r("f", "g", "h")) - fed.residual_r(fed.build_r("f", "g", 0))])

    def r0_nonzero(ctx):
        fed = ctx.fed
        res = fed.residual_r(fed.build_r0())
        return Expect(not res.is_zero() and not fed.is_central(res), f"r0 residual has {res.size()} terms, not central")

    def recorded_probe(ctx):
        fed = ctx.fed
        f = FnSpec.rational(fed.tower, [0, 0, 1], label="SS^2")
        res = fed.residual_r(fed.build_r(f, fed.g_condition(f), 0))
        return Expect(True, f"recorded, no expectation: residual for f = SS^2 is {'zero' if res.is_zero() else 'nonzero'}", skip=True)

    def display(which):
        def run(ctx):
            fed, fr = ctx.fed, ctx.frame
            r = fed.build_r("f", "g", 0)
            lhs = {"Dr": lambda: fr.D(r), "dhat": lambda: fed.dhat(r), "r2": lambda: r * r}[which]()
            rhs = {"Dr": fed.display_Dr, "dhat": fed.display_dhat_r, "r2": fed.display_r_squared}[which]("f", "g")
            return Vanish([lhs - rhs])

        return run

    def appA(ctx):
        d2 = ctx.fed.dtilde_squared(ctx.rsol)
        return Vanish(list(d2.values()), "on s1, s2, k1, k2")

    def appA_r0(ctx):
        fed = ctx.fed
        r0 = fed.build_r0()
        res0 = fed.residual_r(r0)
        d2 = fed.dtilde_squared(r0)
        gens = fed.generators()
        return Vanish([d2[k] - graded_comm(res0, gens[k]) for k in gens])

    def trivial(ctx):
        fed = ctx.fed
        rt = fed.trivial_r()
        res = fed.residual_r(rt)
        state = "zero" if res.is_zero() else ("central" if fed.is_central(res) else "nonzero, not central")
        return Expect(True, f"recorded, no expectation: trivial r residual is {state}", skip=True)

    return [
        CheckSpec("r.g_cond.-1/3", "g-cond", g_cond(m13, 1)),
        CheckSpec("r.g_cond.-1/12", "g-cond", g_cond(m112, Fraction(1, 4))),
        CheckSpec("r.residual.-1/3", "eq-r", residual(m13, 1)),
        CheckSpec("r.residual.-1/12", "eq-r", residual(m112, Fraction(1, 4))),
        CheckSpec("r.residual.probe_SS", "eq-r", probe),
        CheckSpec("r.residual.jet", "eq-r", jet_probe),
        CheckSpec("r.residual.recorded_SS2", "eq-r", recorded_probe),
        CheckSpec("r.h_independence", "r-ansatz", h_indep),
        CheckSpec("r.r0_not_solution", "r-ansatz", r0_nonzero),
        CheckSpec("r.display.Dr", "Dr", display("Dr")),
        CheckSpec("r.display.dhat_r", "dhat-r", display("dhat")),
        CheckSpec("r.display.r2", "r2", display("r2")),
        CheckSpec("r.solution", "r-soln", lambda c: Vanish([c.fed.build_r(m13, 1, 0) - c.fed.r_solution_display()])),
        CheckSpec("r.appA.dtilde2", "appA", appA),
        CheckSpec("r.appA.residual_comm", "appA-residual", appA_r0),
        CheckSpec("r.appB.trivial", "appB", trivial),
    ]


def broken_probe() -> CheckSpec:
    """A check that must fail: the r-equation residual of ``r0`` alone."""
    return CheckSpec("r.probe.r0_only", "eq-r", lambda c: Vanish([c.fed.residual_r(c.fed.build_r0())], "r0 only"))


# -- gauge --------------------------------------------------------------------------------------


def random_generator(ctx: Context, index: int) -> OpExpr:
    """Seeded 0-form built from fiber monomials with rational base coefficients."""
    rng = random.Random(ctx.seed * 1000 + index)
    fed, a = ctx.fed, ctx.frame.alg
    tw = a.tower
    pool = [
        fed.zs,
        fed.zxs,
        a.var("s1") * a.k(2),
        a.var("s2") * a.var("s1"),
        a.k(1),
        a.var("s2"),
        ctx.frame.SS,
    ]
    G = a.zero
    for term in rng.sample(pool, 3):
        c = tw.const(Fraction(rng.randint(-4, 4) or 1, rng.randint(1, 3)))
        if rng.random() < 0.5:
            c = c * tw.var(rng.choice(["x1", "x2", "p1"]))
        G = G + term.scale(c)
    return G


def _gauge() -> list:
    specs = []

    def gauge(i):
        def result(ctx):
            return ctx.get(f"gauge{i}", lambda: ctx.fed.gauge_transform(ctx.rsol, random_generator(ctx, i), 3))

        def residual(ctx):
            return Vanish([result(ctx).residual], "mod eps^3")

        def defect(ctx):
            return Vanish([result(ctx).flat_defect], "mod eps^3")

        def relations(ctx):
            gr = result(ctx)
            U, Ui = gr.U, gr.Uinv
            N = U.order

            def conj(A):
                return U * EpsPoly.constant(A, N) * Ui

            X = [conj(c) for c in ctx.obs.xhat()]
            L = [conj(c) for c in ctx.obs.lhat()]
            out = []
            for a in range(3):
                for b in range(3):
                    out.append(X[a] * X[b] - X[b] * X[a])
                    rhs = EpsPoly.constant(ctx.frame.alg.zero, N)
                    rhsL = EpsPoly.constant(ctx.frame.alg.zero, N)
                    for c in range(3):
                        e = levi_civita(a, b, c)
                        if e:
                            rhs = rhs + X[c] * Fraction(e)
                            rhsL = rhsL + L[c] * Fraction(e)
                    out.append(X[a] * L[b] - L[b] * X[a] - rhs)
                    out.append(L[a] * L[b] - L[b] * L[a] - rhsL)
            xx = X[0] * X[0] + X[1] * X[1] + X[2] * X[2] - EpsPoly.constant(ctx.frame.alg.one, N)
            out.append(xx)
            return Vanish(out, "conjugated xx, xL, LL, x.x mod eps^3")

        return residual, defect, relations

    for i in (1, 2, 3):
        res, dfc, rel = gauge(i)
        specs.append(CheckSpec(f"gauge.G{i}.residual", "gauge", res))
        specs.append(CheckSpec(f"gauge.G{i}.defect", "gauge-residual", dfc))
        specs.append(CheckSpec(f"gauge.G{i}.relations", "gauge", rel))
    return specs


# -- flat sections ------------------------------------------------------------------------------


def _flat_sections() -> list:
    from .observables import SLOTS

    def lo_check(name):
        def run(ctx):
            ob = ctx.obs.observable(name)
            return Expect(ob.lo_ok(), "lo = " + ", ".join(str(v) for v in ob.lo()))

        return run

    def slots(which):
        def run(ctx):
            O = ctx.obs
            key = f"proj-{which}"

            def build():
                proj = O.coefficient_equations(which)
                return proj, O._last_reconstruction_ok

            proj, recon = ctx.get(key, build)
            disp = O.xhat_display() if which == "x" else O.phat_display()
            diffs = [proj[s] - disp[s] for s in SLOTS]
            if not recon:
                return Expect(False, "slot projection does not reconstruct the residual")
            return Vanish(diffs, "6 slots, reconstruction ok")

        return run

    def solutions(ctx):
        O = ctx.obs
        tw = O.tower
        Rinv = FnSpec(tw.R.inv(), "1/R")
        R = FnSpec(tw.R, "R")
        xs = O.xhat_display(Rinv, FnSpec(-tw.R.inv(), "-1/R"), 0)
        ps = O.phat_display(0, R, R, 0)
        return Vanish(list(xs.values()) + list(ps.values()), "12 slots at the solutions")

    def bare(ctx):
        W = ctx.obs.flatness(ctx.frame.x)
        return Expect(not W.is_zero(), "bare x is not flat")

    return [
        CheckSpec("flat.xhat", "cond-xhat", lambda c: Vanish([c.obs.flatness(c.obs.xhat())])),
        CheckSpec("flat.phat", "cond-phat", lambda c: Vanish([c.obs.flatness(c.obs.phat())])),
        CheckSpec("flat.lhat", "L-def", lambda c: Vanish([c.obs.flatness(c.obs.lhat())])),
        CheckSpec("flat.bare_x", "cond-xhat", bare),
        CheckSpec("flat.lo.x", "lo", lo_check("x")),
        CheckSpec("flat.lo.p", "lo", lo_check("p")),
        CheckSpec("flat.lo.L", "lo", lo_check("L")),
        CheckSpec("flat.display.xhat", "xhat-display", slots("x")),
        CheckSpec("flat.display.phat", "phat-display", slots("p")),
        CheckSpec("flat.solutions", "xhat-soln", solutions),
    ]


# -- commutators --------------------------------------------------------------------------------

_REL_TAGS = {
    "xx": "xx",
    "xp": "xp",
    "pp": "pp",
    "xL": "xL",
    "LL": "LL",
    "x.x": "xhat-norm",
    "p.x": "xp-conds",
    "x.p": "xp-conds",
    "L.x": "cond-xL",
    "x.L": "cond-xL",
    "L=xXp": "L-def",
    "L=-pXx": "L-def",
}

_REL_NAMES = (
    [f"{k}[{i}{j}]" for k in ("xx", "xp", "pp", "xL", "LL") for i in (1, 2, 3) for j in (1, 2, 3)]
    + ["x.x", "p.x", "x.p", "L.x", "x.L", "L=xXp", "L=-pXx"]
)


def _rel_tag(name: str) -> str:
    return _REL_TAGS[name.split("[")[0]]


def _commutators() -> list:
    def rel(name):
        def run(ctx):
            rels = ctx.get("rels", ctx.obs.commutator_relations)
            lhs, rhs = rels[name]
            return Vanish([lhs - rhs])

        return run

    def pnew(A):
        def run(ctx):
            rels = ctx.obs.pnew_relations(A)
            return Vanish([l - r for l, r in rels.values()], f"{len(rels)} relations")

        return run

    def closure(ctx):
        # words of length <= 2 in x^, L^ commute into constant combinations of single letters
        X, L = ctx.obs.xhat(), ctx.obs.lhat()
        out = []
        for a in range(3):
            for b in range(3):
                for c in range(3):
                    # [L_a, x_b x_c] = eps_abd x_d x_c + x_b eps_acd x_d
                    rhs = ctx.frame.alg.zero
                    for d in range(3):
                        e1, e2 = levi_civita(a, b, d), levi_civita(a, c, d)
                        if e1:
                            rhs = rhs + e1 * (X[d] * X[c])
                        if e2:
                            rhs = rhs + e2 * (X[b] * X[d])
                    out.append(graded_comm(L[a], X[b] * X[c]) - rhs)
        return Vanish(out, "[L, xx] closes")

    def antisym(ctx):
        L = ctx.obs.lhat()
        return Vanish([graded_comm(L[a], L[b]) + graded_comm(L[b], L[a]) for a in range(3) for b in range(3)])

    specs = [CheckSpec(f"comm.{n}", _rel_tag(n), rel(n)) for n in _REL_NAMES]
    for A in (0, 1, -2):
        specs.append(CheckSpec(f"comm.pnew.A={A}", "xp-conds", pnew(A)))
    specs.append(CheckSpec("comm.closure", "LL", closure))
    specs.append(CheckSpec("comm.LL_antisymmetric", "LL", antisym))
    return specs


# -- identities ---------------------------------------------------------------------------------


def _identities() -> list:
    from .identities import CATALOG, check_identity, engine_namespace, literal_ordering_offsets, printed_dtilde_x_residual

    def ns(ctx):
        return ctx.get("ns", lambda: engine_namespace(ctx.frame, ctx.fed))

    def ident(I):
        def run(ctx):
            n = ns(ctx)
            return Vanish([lhs - rhs for _, lhs, rhs in I.build(n)], I.text)

        return run

    def oracle(I):
        def run(ctx):
            from .identities import ambient_namespace, oracle_sides
            from .oracle import Ambient, agree

            rng = random.Random(ctx.seed)
            npts = max(ctx.points, 1)
            sides = oracle_sides(I, ns(ctx))
            bad = 0
            for _ in range(npts):
                pt = random_point(rng)
                amb = oracle_sides(I, ambient_namespace(Ambient(pt)))
                bad += sum(not agree(e, a) for (_, e), (_, a) in zip(sides, amb))
            return Expect(bad == 0, f"engine and ambient oracle agree at {npts} points" if not bad else f"{bad} disagreements")

        return run

    def printed_dtx(ctx):
        fr = ctx.frame
        res = printed_dtilde_x_residual(fr)
        iss = fr.alg.scalar(fr.tower.SS.inv())
        xs = cross(fr.x, fr.s)
        expected = xs * (iss * dot(fr.s, fr.theta)) - xs * dot(fr.s, fr.theta)
        return Vanish([VecOp(*res) - expected], "printed form misses 1/s^2 on its second term")

    def literal(name):
        def run(ctx):
            fr = ctx.frame
            off = ctx.get("offsets", lambda: literal_ordering_offsets(fr, ctx.fed))[name]
            third = Fraction(1, 3)
            expected = {
                "r0k": -third * fr.theta,
                "r0z": -third * cross(fr.theta, fr.x),
                "Dtz": cross(fr.x, fr.theta),
            }[name]
            return Vanish([VecOp(*off) - expected], "literal reading is off by an hbar-order term")

        return run

    specs = []
    for I in CATALOG:
        specs.append(CheckSpec(f"ident.{I.id}", I.tag, ident(I)))
        if I.oracle:
            specs.append(CheckSpec(f"ident.oracle.{I.id}", I.tag, oracle(I)))
    specs.append(CheckSpec("ident.appC-18.printed", "appC-Dtx", printed_dtx))
    specs.append(CheckSpec("ident.appC-15.literal", "appC-r0k", literal("r0k")))
    specs.append(CheckSpec("ident.appC-16.literal", "appC-r0z", literal("r0z")))
    specs.append(CheckSpec("ident.appC-19.literal", "appC-Dtz", literal("Dtz")))
    return specs


# -- moyal --------------------------------------------------------------------------------------


def _random_phase_poly(ring, rng, max_degree=4, nterms=4):
    out = ring.zero()
    for _ in range(nterms):
        m = ring.one()
        for _ in range(rng.randint(0, max_degree)):
            m = m * ring.var(rng.choice(ring.phase_vars))
        out = out + m * Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return out


def _moyal() -> list:
    from . import moyal as M

    def xp(ctx):
        R = M.FlatRing(2)
        out = []
        for a in range(2):
            for b in range(2):
                d = R.ihbar if a == b else R.zero()
                out.append(M.star_comm(R.x(a), R.p(b)) - d)
        single = M.moyal_star(R.x(0), R.p(0)) - (R.x(0) * R.p(0) + R.ihbar * Fraction(1, 2))
        return Vanish(out + [single], "[x^a, p_b] = i hbar delta, x*p = xp + i hbar/2")

    def assoc(ctx):
        R = M.FlatRing(2)
        rng = random.Random(ctx.seed)
        out = []
        for _ in range(25):
            f, g, h = (_random_phase_poly(R, rng) for _ in range(3))
            out.append(M.moyal_star(M.moyal_star(f, g), h) - M.moyal_star(f, M.moyal_star(g, h)))
        return Vanish(out, "25 random triples of degree <= 4")

    def classical(ctx):
        R = M.FlatRing(2)
        rng = random.Random(ctx.seed + 1)
        out = []
        for _ in range(10):
            f, g = _random_phase_poly(R, rng), _random_phase_poly(R, rng)
            out.append(M.moyal_star(f, g).at_hbar_zero() - f * g)
        return Vanish(out, "f*g at hbar = 0")

    def poisson(ctx):
        R = M.FlatRing(2)
        rng = random.Random(ctx.seed + 2)
        out = []
        i = R.const(M.CRat(0, 1))
        for _ in range(10):
            f, g = _random_phase_poly(R, rng), _random_phase_poly(R, rng)
            c = M.star_comm(f, g)
            out += [c.hbar_coeff(0), c.hbar_coeff(1) - i * M.poisson(f, g)]
        return Vanish(out, "[f,g] = i hbar {f,g} + O(hbar^2)")

    def weyl_hom(ctx):
        R = M.FlatRing(2)
        rng = random.Random(ctx.seed + 3)
        out = []
        for _ in range(10):
            A = [rng.choice(R.phase_vars) for _ in range(rng.randint(1, 3))]
            B = [rng.choice(R.phase_vars) for _ in range(rng.randint(1, 3))]
            out.append(M.weyl_map(A + B, R) - M.moyal_star(M.weyl_map(A, R), M.weyl_map(B, R)))
        return Vanish(out, "weyl(AB) = weyl(A) * weyl(B)")

    def two_gauss(ctx):
        _, rho = M.oscillator()
        try:
            M.moyal_star(rho, rho)
        except M.NonTerminatingStar:
            return Expect(True, "rejected")
        return Expect(False, "two Gaussians were multiplied")

    def osc(name):
        def run(ctx):
            ok, detail = ctx.get("osc", M.oscillator_checks)[name]
            return Expect(ok, detail)

        return run

    def flat(n):
        def run(ctx):
            res = ctx.get(f"flat{n}", lambda: M.FlatFedosov(n).checks())
            bad = [k for k, (ok, _) in res.items() if not ok]
            return Expect(not bad, f"{len(res)} checks" + (f"; failing: {bad}" if bad else ""))

        return run

    def convention(ctx):
        # flat [s1, k1] at i hbar = 1 against the sphere [s1, k1] at the north pole
        A = M.FlatAlgebra(n=1)
        flat_val = A.comm(A.s(0), A.k(0)).scalar_value().to_hbar_scalar().at_ihbar_one()
        a = ctx.frame.alg
        sph = graded_comm(a.var("s1"), a.k(1)).scalar_value()
        north = sph.subs({"x1": 0, "x2": 0})
        return Expect(north == a.tower.const(flat_val.re) and flat_val.im == 0, f"flat {flat_val}, sphere {north}")

    specs = [
        CheckSpec("moyal.xp", "moyal", xp),
        CheckSpec("moyal.assoc", "moyal", assoc),
        CheckSpec("moyal.classical", "moyal", classical),
        CheckSpec("moyal.poisson", "moyal", poisson),
        CheckSpec("moyal.weyl_hom", "weyl", weyl_hom),
        CheckSpec("moyal.two_gaussians", "moyal", two_gauss),
        CheckSpec("moyal.convention", "appD", convention),
        CheckSpec("moyal.flat_fedosov.n1", "appD", flat(1)),
        CheckSpec("moyal.flat_fedosov.n2", "appD", flat(2)),
    ]
    for name, cid in (
        ("H*rho0", "osc.H_rho0"),
        ("[H,rho0]", "osc.comm"),
        ("classical", "osc.classical"),
        ("Tr rho0", "osc.trace"),
        ("Tr rho0*H", "osc.trace_H"),
        ("Tr odd", "osc.trace_odd"),
    ):
        specs.append(CheckSpec(f"moyal.{cid}", "wigner", osc(name)))
    return specs


# -- hamiltonian --------------------------------------------------------------------------------


def _hamiltonian() -> list:
    def hl(a):
        return lambda c: Vanish([graded_comm(c.obs.hamiltonian(), c.obs.lhat()[a])])

    def hx(ctx):
        # H = L.L is rotation invariant but does not commute with x^
        H, X = ctx.obs.hamiltonian(), ctx.obs.xhat()
        return Expect(not graded_comm(H, X[0]).is_zero(), "[H, x1] is nonzero")

    return [CheckSpec(f"ham.[H,L{a + 1}]", "H", hl(a)) for a in range(3)] + [CheckSpec("ham.[H,x1]", "H", hx)]


SUITES: dict = {
    "connection": _connection,
    "omega": _omega,
    "r": _r,
    "gauge": _gauge,
    "flat-sections": _flat_sections,
    "commutators": _commutators,
    "identities": _identities,
    "moyal": _moyal,
    "hamiltonian": _hamiltonian,
}


def all_check_ids() -> dict:
    """``{check id: tag}`` over every suite."""
    return {s.id: s.tag for build in SUITES.values() for s in build()}


def run_suites(names, ctx: Context, extra: dict | None = None) -> VerificationReport:
    """Run suites in order.

    ``extra`` maps a suite name to additional specs (used for probes); for a
    suite not in ``names`` only the extra specs run.
    """
    extra = extra or {}
    report = VerificationReport(mode=ctx.mode, seed=ctx.seed, points=ctx.points if ctx.mode == "points" else 0)
    for name in list(names) + [n for n in extra if n not in names]:
        specs = (SUITES[name]() if name in names else []) + list(extra.get(name, []))
        report.suites.append(SuiteResult(name, [run_check(s, ctx) for s in specs]))
    return report

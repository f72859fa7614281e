"""Hypothesis strategies shared across the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from fedosphere.weyl import OpExpr

COEFF_VARS = ("x1", "x2", "p1", "s1", "s2")


@st.composite
def coefficients(draw, tower):
    c = tower.const(Fraction(draw(st.integers(-3, 3)) or 1, draw(st.integers(1, 3))))
    for _ in range(draw(st.integers(0, 2))):
        c = c * tower.var(draw(st.sampled_from(COEFF_VARS)))
    if draw(st.integers(0, 5)) == 0:
        c = c * tower.x3
    return c


@st.composite
def op_exprs(draw, alg, max_terms=3, max_k=2, forms=True):
    """Bounded random elements: few terms, low k degree, at most one form factor."""
    masks = (0, 1, 2, 4, 8) if forms else (0,)
    terms: dict = {}
    for _ in range(draw(st.integers(1, max_terms))):
        key = (draw(st.sampled_from(masks)), draw(st.integers(0, max_k)), draw(st.integers(0, max_k)))
        terms[key] = draw(coefficients(alg.tower))
    return OpExpr(alg, terms)


@st.composite
def word_recipes(draw, depth=2):
    """Random expression in x, p, s, k, theta, alpha, as a function of a namespace."""
    if depth == 0 or draw(st.integers(0, 2)) == 0:
        name = draw(st.sampled_from(("x", "p", "s", "k", "theta", "alpha")))
        i = draw(st.integers(0, 2))
        return lambda ns: getattr(ns, name)[i]
    a = draw(word_recipes(depth - 1))
    b = draw(word_recipes(depth - 1))
    op = draw(st.sampled_from(("+", "*", "comm")))
    if op == "+":
        return lambda ns: a(ns) + b(ns)
    if op == "*":
        return lambda ns: a(ns) * b(ns)
    return lambda ns: ns.comm(a(ns), b(ns))

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fedosphere.lang import (
    FUNCTIONS,
    SCALAR_ATOMS,
    VECTOR_ATOMS,
    Ast,
    Env,
    ParseError,
    SortError,
    evaluate,
    lex,
    parse,
    pretty,
    recognize,
    sort_of,
    unparse,
)

ATOMS = VECTOR_ATOMS + SCALAR_ATOMS + ("X1", "TH2", "LHAT3", "F0", "G2")


def _shape(a: Ast):
    """Tree structure without spans."""
    return (a.kind, a.value, tuple(_shape(x) for x in a.args))


@st.composite
def asts(draw, depth=3):
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        if draw(st.booleans()):
            return Ast("num", (0, 0), draw(st.integers(0, 99)))
        return Ast("atom", (0, 0), draw(st.sampled_from(ATOMS)))
    kind = draw(st.sampled_from(("neg", "add", "sub", "mul", "div", "pow", "call")))
    if kind == "neg":
        return Ast("neg", (0, 0), None, [draw(asts(depth - 1))])
    if kind == "pow":
        return Ast("pow", (0, 0), draw(st.integers(-3, 3)), [draw(asts(depth - 1))])
    if kind == "call":
        name = draw(st.sampled_from(sorted(FUNCTIONS)))
        return Ast("call", (0, 0), name, [draw(asts(depth - 1)) for _ in range(FUNCTIONS[name])])
    return Ast(kind, (0, 0), None, [draw(asts(depth - 1)), draw(asts(depth - 1))])


@settings(max_examples=250)
@given(asts())
def test_round_trip(a):
    text = unparse(a)
    b = parse(text, check=False)
    assert _shape(b) == _shape(a)
    assert unparse(b) == text


@settings(max_examples=100)
@given(asts())
def test_spans_cover_source(a):
    text = unparse(a)
    b = parse(text, check=False)

    def walk(n, lo, hi):
        s, e = n.span
        assert lo <= s <= e <= hi
        for x in n.args:
            walk(x, s, e)

    walk(b, 0, len(text.encode()))


def test_lexer_spans_are_bytes():
    toks = lex("dot(X, P)")
    assert [t.lexeme for t in toks[:-1]] == ["dot", "(", "X", ",", "P", ")"]
    assert toks[2].span == (4, 5)
    assert toks[-1].kind == "end"


@pytest.mark.parametrize(
    "text, start",
    [
        ("X1 +", 4),
        ("dot(X, P", 8),
        ("(SS", 3),
        ("SS ^ X1", 5),
        ("FOO", 0),
        ("S1 $ S2", 3),
        ("", 0),
        ("comm(S1 K1)", 8),
    ],
)
def test_parse_errors(text, start):
    with pytest.raises(ParseError) as info:
        parse(text)
    err = info.value
    assert err.span[0] == start
    assert err.expected


@pytest.mark.parametrize(
    "text",
    ["X + SS", "X * P", "dot(SS, X)", "cross(X, S1)", "comm(X, P)", "X ^ 2", "SS / X", "LO(X)", "VEC(X, S1, S2)", "dot(X)"],
)
def test_ill_sorted_rejected(text):
    with pytest.raises(SortError):
        parse(text)


def test_sorts():
    assert sort_of(parse("cross(X, P)")) == "vector"
    assert sort_of(parse("dot(XHAT, XHAT) - 1")) == "scalar"
    assert sort_of(parse("comm(S1, K)")) == "vector"


@pytest.fixture(scope="module")
def env():
    return Env(jet_order=1)


@pytest.mark.parametrize(
    "text, want",
    [
        ("comm(S1, K1)", "1 - X1^2"),
        ("dot(XHAT, XHAT) - 1", "0"),
        ("comm(XHAT1, LHAT2)", "XHAT3"),
        ("comm(LHAT1, LHAT2)", "LHAT3"),
        ("dot(X, S)", "0"),
        ("2/4", "1/2"),
    ],
)
def test_evaluate_and_recognize(env, text, want):
    assert recognize(evaluate(text, env), env) == want


def test_pretty_vector(env):
    assert pretty(evaluate("VEC(1, 0, X1)", env)) == "VEC(1, 0, X1)"


def test_division_by_zero_is_arithmetic_error(env):
    with pytest.raises(ArithmeticError):
        evaluate("1/(SS - SS)", env)

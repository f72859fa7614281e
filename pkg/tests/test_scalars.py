from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fedosphere.scalars import (
    CRat,
    DivisionByZero,
    EpsPoly,
    JetOverflow,
    PoleAtPoint,
    d_base,
    d_fiber,
    default_tower,
    eval_base_at,
    sphere_point,
)

tw = default_tower()
NAMES = ("x1", "x2", "p1", "p2", "s1", "s2")


def _atoms():
    return [tw.var(n) for n in NAMES] + [tw.x3, tw.rho, tw.I, tw.R, tw.p3]


@st.composite
def scalars(draw, depth=2):
    if depth == 0 or draw(st.booleans()):
        if draw(st.booleans()):
            return tw.const(Fraction(draw(st.integers(-4, 4)), draw(st.integers(1, 3))))
        return draw(st.sampled_from(_atoms()))
    a, b = draw(scalars(depth=depth - 1)), draw(scalars(depth=depth - 1))
    op = draw(st.sampled_from(["+", "-", "*"]))
    return a + b if op == "+" else a - b if op == "-" else a * b


def test_defining_relations():
    assert tw.x3 * tw.x3 == 1 - tw.var("x1") ** 2 - tw.var("x2") ** 2
    assert tw.R * tw.R == tw.SS + 1
    assert tw.I * tw.I == tw.const(-1)
    assert tw.x3.inv() * tw.x3 == tw.one


def test_s3_and_p3_are_transverse():
    x = (tw.var("x1"), tw.var("x2"), tw.x3)
    s = (tw.var("s1"), tw.var("s2"), tw.s3)
    p = (tw.var("p1"), tw.var("p2"), tw.p3)
    assert sum((a * b for a, b in zip(x, s)), tw.zero).is_zero()
    assert sum((a * b for a, b in zip(x, p)), tw.zero).is_zero()
    assert tw.SS == sum((a * a for a in s), tw.zero)


def test_implicit_derivatives():
    x1 = tw.var("x1")
    assert d_base(tw.x3, "x1") == -x1 / tw.x3
    assert d_base(tw.p3, "p1") == -x1 / tw.x3
    # dR/ds1 = (dSS/ds1) / (2R)
    assert d_fiber(tw.R, "s1") == d_fiber(tw.SS, "s1") / (2 * tw.R)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        tw.zero.inv()
    with pytest.raises(DivisionByZero):
        (tw.x3 * tw.x3 + tw.var("x1") ** 2 + tw.var("x2") ** 2 - 1).inv()


def test_jet_overflow():
    with pytest.raises(JetOverflow):
        tw.jet("f", tw.jet_order + 1)


def test_eval_at_point_and_pole():
    pt = sphere_point(Fraction(1, 2), Fraction(1, 3), 2, -1)
    x = pt.x
    assert sum(c * c for c in x) == 1
    assert sum(a * b for a, b in zip(x, pt.p)) == 0
    assert eval_base_at(tw.x3, pt) == CRat(x[2])
    assert eval_base_at(tw.p3, pt) == CRat(pt.p[2])
    eq = sphere_point(1, 0)  # x3 = 0
    with pytest.raises(PoleAtPoint):
        eval_base_at(tw.x3.inv(), eq)


@settings(max_examples=60)
@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.inv() == tw.one


@settings(max_examples=40)
@given(scalars(), scalars())
def test_derivations_obey_leibniz(a, b):
    for v in ("x1", "p2"):
        assert d_base(a * b, v) == d_base(a, v) * b + a * d_base(b, v)
    assert d_fiber(a * b, "s1") == d_fiber(a, "s1") * b + a * d_fiber(b, "s1")


def test_crat_arithmetic():
    i = CRat(0, 1)
    assert i * i == CRat(-1)
    assert (CRat(1, 2) * CRat(1, 2).inv()) == CRat(1)
    with pytest.raises(TypeError):
        CRat.coerce(1j)


def test_epspoly_nilpotent():
    g = tw.var("x1")
    U = EpsPoly.exp(g, 3, tw.one)
    V = EpsPoly.exp(-g, 3, tw.one)
    prod = U * V
    assert prod[0] == tw.one and prod[1].is_zero() and prod[2].is_zero()
    assert U[2] == g * g * Fraction(1, 2)

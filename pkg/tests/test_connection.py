from hypothesis import given, settings

from fedosphere.connection import Frame, levi_civita
from fedosphere.weyl import cross, dot

from strategies import op_exprs

FR = Frame(jet_order=1)
A = FR.alg


def test_levi_civita():
    assert levi_civita(0, 1, 2) == 1
    assert levi_civita(1, 0, 2) == -1
    assert levi_civita(0, 0, 2) == 0


def test_D_on_base_coordinates():
    assert FR.D(FR.x) == cross(FR.theta, FR.x)
    assert FR.D2(FR.x).is_zero()
    assert FR.D2(FR.p).is_zero()


def test_D2_s_is_curvature():
    # D^2 s = omega~ (x cross s)
    assert FR.D2(FR.s) == cross(FR.x, FR.s) * FR.omt


def test_D_preserves_constraints():
    assert FR.D(dot(FR.x, FR.x)).is_zero()
    assert FR.D(dot(FR.x, FR.p)).is_zero()
    assert FR.D(FR.SS).is_zero()
    assert FR.D(FR.omega).is_zero()


def test_area_form_is_closed():
    assert not FR.omt.is_zero()
    assert FR.D(FR.omt).is_zero()
    assert FR.omt.form_degrees() == {2}


@settings(max_examples=40)
@given(op_exprs(A, max_k=1), op_exprs(A, max_k=1))
def test_graded_leibniz(a, b):
    for pa, P in enumerate(a.parity_parts()):
        sign = -1 if pa else 1
        assert FR.D(P * b) == FR.D(P) * b + sign * (P * FR.D(b))


@settings(max_examples=25)
@given(op_exprs(A, max_k=1, forms=False))
def test_D_squared_is_inner_on_zero_forms(a):
    # D^2 is a derivation: D^2(ab) = D^2(a) b + a D^2(b) on 0-forms
    b = FR.SS + A.k(1)
    assert FR.D2(a * b) == FR.D2(a) * b + a * FR.D2(b)

from fractions import Fraction

import pytest

from fedosphere.fedosov import FnSpec, TruncationTooSmall
from fedosphere.scalars import EpsPoly


def test_g_condition_exact_values(fed):
    assert fed.g_condition(Fraction(-1, 3)).value == fed.tower.one
    assert fed.g_condition(Fraction(-1, 12)).value == fed.tower.const(Fraction(1, 4))


def test_fnspec(tower):
    f = FnSpec.rational(tower, (0, 1))
    assert f.value == tower.SS
    assert f.prime() == tower.one
    assert FnSpec.const(tower, 3).prime().is_zero()
    assert FnSpec.const(tower, 3).is_constant()


def test_r_contains_r0(fed):
    assert fed.build_r(0, 0, 0) == fed.build_r0()
    assert not fed.residual_r(fed.build_r0()).is_zero()


def test_solution_display(fed):
    assert fed.build_r(Fraction(-1, 3), 1, 0) == fed.r_solution_display()


def test_square_identity(fed):
    lhs, rhs = fed.square_identity()
    assert lhs == rhs


def test_is_central(fed):
    assert fed.is_central(fed.alg.scalar(fed.tower.var("x1")))
    assert not fed.is_central(fed.alg.k(1))


def test_gauge_needs_order_two(fed):
    with pytest.raises(TruncationTooSmall):
        fed.gauge_transform(fed.build_r0(), fed.alg.k(1), order=1)


def test_gauge_exponential_is_invertible(fed):
    G = fed.zs
    U = EpsPoly.exp(G, 3, fed.alg.one)
    V = EpsPoly.exp(-G, 3, fed.alg.one)
    P = U * V
    assert P[0] == fed.alg.one
    assert P[1].is_zero() and P[2].is_zero()

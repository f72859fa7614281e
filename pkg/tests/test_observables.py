import pytest

from fedosphere.fedosov import FnSpec
from fedosphere.observables import SLOTS
from fedosphere.weyl import cross, graded_comm


def test_leading_orders(obs):
    for name in ("x", "p", "L"):
        assert obs.observable(name).lo_ok(), name


def test_normal_ordered_momentum_constant(obs, frame):
    # the normal-ordered constant of p^ carries an hbar correction 2x
    got = obs.observable("p").normal_ordered_constant()
    want = tuple((p + 2 * x).scalar_value() for p, x in zip(frame.p, frame.x))
    assert got == want


@pytest.mark.parametrize("name", ["x", "p"])
def test_flat(obs, name):
    A = obs.xhat() if name == "x" else obs.phat()
    assert obs.flatness(A).is_zero()


def test_bare_position_is_not_flat(obs, frame):
    assert not obs.flatness(frame.x).is_zero()


def test_lhat_is_x_cross_p(obs):
    assert obs.lhat() == cross(obs.xhat(), obs.phat())


def test_canonical_commutator(obs, alg):
    X, P = obs.xhat(), obs.phat()
    assert graded_comm(X[0], P[0]) == alg.one - X[0] * X[0]
    assert graded_comm(X[0], X[1]).is_zero()


def test_projection_matches_display(obs):
    eqs = obs.coefficient_equations("x")
    assert obs._last_reconstruction_ok
    disp = obs.xhat_display()
    assert set(eqs) == set(SLOTS)
    assert all((eqs[s] - disp[s]).is_zero() for s in SLOTS)
    assert not all(c.is_zero() for c in eqs.values())


def test_solutions_annihilate_slots(obs, tower):
    R = FnSpec(tower.R, "R")
    xs = obs.xhat_display(FnSpec(tower.R.inv()), FnSpec(-tower.R.inv()), 0)
    ps = obs.phat_display(0, R, R, 0)
    assert all(c.is_zero() for c in list(xs.values()) + list(ps.values()))


def test_wrong_solution_is_rejected(obs, tower):
    xs = obs.xhat_display(FnSpec(tower.R.inv()), FnSpec(tower.R.inv()), 0)
    assert not all(c.is_zero() for c in xs.values())

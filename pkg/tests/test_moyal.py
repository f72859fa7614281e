from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fedosphere import moyal as M

R1 = M.FlatRing(1)
R2 = M.FlatRing(2)


def _u(ring):
    """The inverse of hbar."""
    return M.PhasePoly(ring, ring.gen["u"])


@st.composite
def polys(draw, ring, max_degree=4, max_terms=4):
    out = ring.zero()
    for _ in range(draw(st.integers(1, max_terms))):
        m = ring.const(Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4))))
        for _ in range(draw(st.integers(0, max_degree))):
            m = m * ring.var(draw(st.sampled_from(ring.phase_vars)))
        out = out + m
    return out


def test_canonical_pair():
    x, p = R1.x(0), R1.p(0)
    assert M.star_comm(x, p) == R1.ihbar
    assert M.moyal_star(x, p) == x * p + R1.ihbar * Fraction(1, 2)
    assert M.star_comm(R2.x(0), R2.p(1)).is_zero()


def test_ring_relations():
    assert R1.ihbar * R1.ihbar == -(R1.hbar * R1.hbar)
    assert R1.hbar * R1.inv_ihbar * R1.ihbar == R1.hbar
    assert R1.hbar * _u(R1) == R1.one()


@settings(max_examples=25)
@given(polys(R2), polys(R2), polys(R2))
def test_star_associative(f, g, h):
    assert M.moyal_star(M.moyal_star(f, g), h) == M.moyal_star(f, M.moyal_star(g, h))


@settings(max_examples=30)
@given(polys(R1), polys(R1))
def test_commutator_leading_term_is_poisson(f, g):
    c = M.star_comm(f, g)
    assert c.hbar_coeff(1) == M.poisson(f, g) * R1.var("I")
    assert c.at_hbar_zero().is_zero()


@settings(max_examples=30)
@given(polys(R1), polys(R1))
def test_star_deforms_pointwise_product(f, g):
    assert M.moyal_star(f, g, order=0) == f * g
    assert M.moyal_star(f, g).at_hbar_zero() == f * g


def test_weyl_map_is_symmetric_ordering():
    x, p = R1.x(0), R1.p(0)
    sym = (M.weyl_map(["x1", "p1"], R1) + M.weyl_map(["p1", "x1"], R1)) * Fraction(1, 2)
    assert sym == x * p


def test_oscillator():
    for name, (ok, detail) in M.oscillator_checks().items():
        assert ok, f"{name}: {detail}"


def test_gaussian_star_gaussian_refused():
    _, rho = M.oscillator(R1)
    with pytest.raises(M.NonTerminatingStar):
        M.moyal_star(rho, rho)


def test_divergent_trace():
    x, p = R1.x(0), R1.p(0)
    bad = M.GaussSymbol(R1.one(), (x * x + p * p) * _u(R1))
    with pytest.raises(M.DivergentTrace):
        M.star_trace(bad)


def test_hbar_scalar_at_ihbar_one():
    # hbar = -i when i hbar = 1
    assert M.HbarScalar.from_dict({1: M.CRat(1)}).at_ihbar_one() == M.CRat(0, -1)


@pytest.mark.parametrize("n", [1, 2])
def test_flat_fedosov(n):
    for name, (ok, detail) in M.FlatFedosov(n).checks().items():
        assert ok, f"{name}: {detail}"

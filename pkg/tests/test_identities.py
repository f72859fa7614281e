from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fedosphere.connection import Frame
from fedosphere.identities import CATALOG, check_identity, engine_namespace, literal_ordering_offsets, vdot
from fedosphere.weyl import VecOp, cross

SMALL_NS = engine_namespace(Frame(jet_order=1))


@pytest.fixture(scope="module")
def ns(fed):
    return engine_namespace(fed.frame, fed)


def test_catalog_ids_unique():
    ids = [I.id for I in CATALOG]
    assert len(ids) == len(set(ids)) == 19


@pytest.mark.parametrize("ident", CATALOG, ids=[I.id for I in CATALOG])
def test_identity_holds(ident, ns):
    bad = [label for label, ok in check_identity(ident, ns) if not ok]
    assert not bad


@settings(max_examples=30)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=1, max_size=4))
def test_shift_rule_random_cubic(coeffs):
    ns = SMALL_NS
    t = vdot(ns.k, ns.s)

    def f(u):
        acc = ns.zero
        for c in reversed(coeffs):
            acc = acc * u + ns.one * c
        return acc

    for a in range(3):
        assert ns.s[a] * f(t) == f(t + ns.one) * ns.s[a]


def test_literal_readings_are_off_by_known_terms(frame, fed):
    off = literal_ordering_offsets(frame, fed)
    third = Fraction(1, 3)
    assert VecOp(*off["r0k"]) == -third * frame.theta
    assert VecOp(*off["r0z"]) == -third * cross(frame.theta, frame.x)
    assert VecOp(*off["Dtz"]) == cross(frame.x, frame.theta)

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fedosphere.connection import Frame
from fedosphere.identities import CATALOG, ambient_namespace, engine_namespace, oracle_sides
from fedosphere.oracle import Ambient, agree, oracle_3c
from fedosphere.scalars import random_point, sphere_point

from strategies import word_recipes

FRAME = Frame(jet_order=1)
NS = engine_namespace(FRAME)


def test_ambient_commutator():
    pt = sphere_point(Fraction(1, 3), Fraction(1, 5), 1, 2)
    amb = Ambient(pt)
    ns = ambient_namespace(amb)
    for a in range(3):
        for b in range(3):
            expected = (1 if a == b else 0) - pt.x[a] * pt.x[b]
            assert (ns.comm(ns.s[a], ns.k[b]) - amb.const(expected)).is_zero()


@settings(max_examples=80)
@given(word_recipes(), st.integers(0, 10_000))
def test_random_expressions_agree(build, seed):
    pt = random_point(random.Random(seed))
    assert agree(build(NS), oracle_3c(build, pt))


def test_disagreement_is_detected():
    pt = random_point(random.Random(1))
    E = NS.s[0] * NS.k[0]
    assert not agree(E, oracle_3c(lambda ns: ns.k[0] * ns.s[0], pt))


ORACLE_IDS = [I.id for I in CATALOG if I.oracle]


@pytest.mark.parametrize("ident", [I for I in CATALOG if I.oracle], ids=ORACLE_IDS)
def test_catalog_agrees_at_20_points(ident, fed):
    ns = engine_namespace(fed.frame, fed)
    sides = oracle_sides(ident, ns)
    rng = random.Random(2024)
    for _ in range(20):
        amb = oracle_sides(ident, ambient_namespace(Ambient(random_point(rng))))
        for (_, e), (_, a) in zip(sides, amb):
            assert agree(e, a)

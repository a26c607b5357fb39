"""Tests for the graded coefficient rings and the Hazewinkel change of
basis between the m- and v-generators."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fgltransfer.coefficients import (
    BP_RATIONAL, MORAVA_K, RingError, make_ring, rational_ring,
    v_from_m, m_from_v, to_v_basis, to_m_basis, integrality_check,
)


def bp_ring(p=2, N=3):
    return make_ring(BP_RATIONAL, p, N=N)


def test_ring_generator_degrees():
    ring = bp_ring(2, 3)
    for n in (1, 2, 3):
        assert ring.degrees["v_%d" % n] == -2 * (2 ** n - 1)
        assert ring.degrees["m_%d" % n] == -2 * (2 ** n - 1)
    morava = make_ring(MORAVA_K, 3, s=2)
    assert morava.gens == ("v_2",)
    assert morava.degrees["v_2"] == -16


def test_ring_rejects_bad_parameters():
    with pytest.raises(RingError):
        make_ring(MORAVA_K, 4, s=1)
    with pytest.raises(RingError):
        make_ring(MORAVA_K, 3, s=0)
    with pytest.raises(RingError):
        make_ring(BP_RATIONAL, 2, N=0)
    with pytest.raises(RingError):
        make_ring("mystery", 2, N=1)


def test_scalar_arithmetic_basics():
    ring = bp_ring()
    a = ring.gen("v_1", 2, Fraction(3, 5))
    b = ring.gen("v_2")
    assert (a + b) - b == a
    assert a * b == b * a
    assert (a + b) * (a + b) == a * a + 2 * a * b + b * b
    assert (a - a).is_zero()
    assert ring.from_number(0).is_zero()


def test_scalar_degree():
    ring = bp_ring()
    assert ring.gen("v_1").degree() == -2
    assert ring.gen("v_2", 3).degree() == -18
    mixed = ring.gen("v_1") + ring.gen("v_2")
    assert mixed.degree() is None
    assert ring.from_number(7).degree() == 0


def test_morava_residue_arithmetic():
    ring = make_ring(MORAVA_K, 5, s=1)
    a = ring.from_number(3)
    assert a + a == ring.from_number(1)
    assert (a * a).as_number() == 4
    assert (-a).as_number() == 2
    # negative v-exponents are allowed in the Laurent ring
    inv = ring.gen("v_1", 1, 2).inverse()
    assert ring.gen("v_1", 1, 2) * inv == ring.one()


def test_monomial_inverse():
    ring = bp_ring()
    half = ring.from_number(Fraction(1, 2))
    assert half.inverse() == ring.from_number(2)
    with pytest.raises(RingError):
        ring.gen("v_1").inverse()
    with pytest.raises(RingError):
        (ring.one() + ring.gen("v_1")).inverse()


def test_hazewinkel_v1_is_p_m1():
    # v_1 = p m_1 is the base case of the recursion, so m_1 = v_1 / p
    for p in (2, 3, 5):
        ring = make_ring(BP_RATIONAL, p, N=2)
        assert v_from_m(1, ring) == ring.gen("m_1", 1, p)
        assert m_from_v(1, ring) == ring.gen("v_1", 1, Fraction(1, p))


def test_hazewinkel_v2_expansion():
    # v_2 = p m_2 - m_1 v_1^p with v_1 = p m_1 substituted
    p = 2
    ring = make_ring(BP_RATIONAL, p, N=2)
    expected = ring.gen("m_2", 1, p) - ring.gen("m_1") * (
        ring.gen("m_1", 1, p) ** p)
    assert v_from_m(2, ring) == expected


def test_basis_roundtrip():
    ring = bp_ring(2, 3)
    samples = [
        ring.gen("v_1", 3),
        ring.gen("v_2") * ring.gen("v_1", 1, Fraction(7, 3)),
        ring.gen("v_3") + ring.gen("v_1", 5, -2),
    ]
    for sc in samples:
        assert to_v_basis(to_m_basis(sc)) == sc


@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2),
                          st.integers(-4, 4)), max_size=4))
def test_basis_roundtrip_random(spec):
    ring = bp_ring(3, 2)
    sc = ring.zero()
    for e1, e2, c in spec:
        sc = sc + ring.gen("v_1", e1, c) * ring.gen("v_2", e2)
    assert to_v_basis(to_m_basis(sc)) == sc


def test_integrality_check():
    ring = bp_ring(2, 2)
    assert integrality_check(ring.gen("v_1", 1, Fraction(1, 3)), 2)
    assert not integrality_check(ring.gen("v_1", 1, Fraction(1, 2)), 2)
    with pytest.raises(RingError):
        integrality_check(ring.gen("m_1"), 2)


def test_rational_ring_custom_generators():
    ring = rational_ring(3, ("v_2",), {"v_2": -16})
    sc = ring.gen("v_2", 2, Fraction(1, 3))
    assert sc.degree() == -32
    with pytest.raises(RingError):
        ring.gen("v_1")

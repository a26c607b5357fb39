"""Tests for sparse truncated series: arithmetic against a dense
convolution oracle, reversion against the Lagrange-inversion values, and
the quotient rewriting rules."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fgltransfer.coefficients import BP_RATIONAL, make_ring
from fgltransfer.series import (
    SparseSeries, VariableTable, QuotientSpec, SeriesError,
    NILPOTENT, P_SERIES, reduce_series, reversion,
)
from fgltransfer.symfun import plain_ring


def univar(cap=None, truncation=None):
    return VariableTable([("x", 2, cap)]), truncation


def from_list(ring, vars, coeffs, truncation=None):
    """Dense coefficient list -> sparse series (index = exponent)."""
    terms = {(e,): ring.from_number(c) for e, c in enumerate(coeffs) if c}
    return SparseSeries(ring, vars, terms, truncation)


def to_list(series, length):
    out = [Fraction(0)] * length
    for (e,), sc in series.terms.items():
        if e < length:
            out[e] = sc.as_number()
    return out


def dense_mul(a, b, length):
    out = [Fraction(0)] * length
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < length:
                out[i + j] += x * y
    return out


def test_variable_table_validation():
    with pytest.raises(SeriesError):
        VariableTable([("x", 3)])
    with pytest.raises(SeriesError):
        VariableTable([("x", 2), ("x", 4)])
    vars = VariableTable([("x", 2), ("y", 4)])
    assert vars.weight((2, 1)) == 8


def test_mul_against_dense_convolution():
    ring = plain_ring()
    vars, _ = univar()
    a = [Fraction(k, k + 1) for k in range(9)]
    b = [Fraction((-1) ** k * (k + 2)) for k in range(9)]
    fa = from_list(ring, vars, a, truncation=16)
    fb = from_list(ring, vars, b, truncation=16)
    assert to_list(fa * fb, 9) == dense_mul(a, b, 9)


@settings(max_examples=50)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6),
       st.lists(st.integers(-5, 5), min_size=1, max_size=6))
def test_mul_convolution_random(a, b):
    ring = plain_ring()
    vars, _ = univar()
    length = len(a) + len(b) - 1
    fa = from_list(ring, vars, a, truncation=2 * length)
    fb = from_list(ring, vars, b, truncation=2 * length)
    assert to_list(fa * fb, length) == dense_mul(
        [Fraction(c) for c in a], [Fraction(c) for c in b], length)


@settings(max_examples=50)
@given(st.lists(st.integers(-3, 3), max_size=5),
       st.lists(st.integers(-3, 3), max_size=5),
       st.lists(st.integers(-3, 3), max_size=5))
def test_ring_laws_random(a, b, c):
    ring = plain_ring()
    vars, _ = univar()
    fa = from_list(ring, vars, a, truncation=40)
    fb = from_list(ring, vars, b, truncation=40)
    fc = from_list(ring, vars, c, truncation=40)
    assert fa + fb == fb + fa
    assert (fa + fb) + fc == fa + (fb + fc)
    assert fa * fb == fb * fa
    assert fa * (fb + fc) == fa * fb + fa * fc


def test_cap_truncates_products():
    ring = plain_ring()
    vars = VariableTable([("z", 2, 3)])
    z = SparseSeries.variable(ring, vars, "z")
    assert (z ** 3) * z == SparseSeries(ring, vars, None)


def test_pow_matches_repeated_mul():
    ring = plain_ring()
    vars, _ = univar()
    f = from_list(ring, vars, [0, 1, 1], truncation=20)
    g = f
    for _ in range(4):
        g = g * f
    assert f ** 5 == g


def test_reversion_lagrange_values():
    # f = x + x^2 has inverse x - x^2 + 2x^3 - 5x^4 + 14x^5 - ...
    # (signed Catalan numbers, by Lagrange inversion)
    ring = plain_ring()
    vars, _ = univar()
    f = from_list(ring, vars, [0, 1, 1], truncation=10)
    g = reversion(f, "x")
    assert to_list(g, 6) == [0, 1, -1, 2, -5, 14]
    assert f.substitute({"x": g}) == from_list(ring, vars, [0, 1],
                                               truncation=10)
    assert g.substitute({"x": f}) == from_list(ring, vars, [0, 1],
                                               truncation=10)


def test_reversion_rejects_bad_leading_term():
    ring = plain_ring()
    vars, _ = univar()
    with pytest.raises(SeriesError):
        reversion(from_list(ring, vars, [0, 2], truncation=6), "x")
    with pytest.raises(SeriesError):
        reversion(from_list(ring, vars, [1, 1], truncation=6), "x")


def test_substitute_rejects_constant_term():
    ring = plain_ring()
    vars, _ = univar()
    f = from_list(ring, vars, [0, 1, 3], truncation=10)
    g = from_list(ring, vars, [1, 1], truncation=10)
    with pytest.raises(SeriesError):
        f.substitute({"x": g})


def test_inverse_geometric():
    ring = plain_ring()
    vars, _ = univar()
    f = from_list(ring, vars, [1, -1], truncation=10)
    inv = f.inverse()
    assert to_list(inv, 6) == [1, 1, 1, 1, 1, 1]
    one = from_list(ring, vars, [1], truncation=10)
    assert f * inv == one


def test_divide_by_var_roundtrip():
    ring = plain_ring()
    vars, _ = univar()
    f = from_list(ring, vars, [0, 0, 2, 5], truncation=10)
    x = SparseSeries.variable(ring, vars, "x", truncation=10)
    assert f.divide_by_var("x", 2) * x * x == f
    with pytest.raises(SeriesError):
        from_list(ring, vars, [1], truncation=10).divide_by_var("x")


def test_with_vars_rename():
    ring = plain_ring()
    vars, _ = univar()
    f = from_list(ring, vars, [0, 1, 4], truncation=10)
    target = VariableTable([("c", 2), ("c2", 4)])
    g = f.with_vars(target, rename={"x": "c"})
    assert g.terms == {(1, 0): ring.from_number(1),
                       (2, 0): ring.from_number(4)}


def test_coefficients_of_splits_variable():
    ring = plain_ring()
    vars = VariableTable([("x", 2), ("y", 2)])
    x = SparseSeries.variable(ring, vars, "x", truncation=10)
    y = SparseSeries.variable(ring, vars, "y", truncation=10)
    f = x * x + 3 * x * y + y
    buckets = f.coefficients_of("x")
    assert buckets[2] == f.spawn({(0, 0): ring.from_number(1)})
    assert buckets[1] == f.spawn({(0, 1): ring.from_number(3)})
    assert buckets[0] == f.spawn({(0, 1): ring.from_number(1)})


def test_nilpotent_rule():
    ring = plain_ring()
    vars = VariableTable([("z", 2)])
    z = SparseSeries.variable(ring, vars, "z", truncation=20)
    spec = QuotientSpec([(NILPOTENT, "z", 4)])
    f = 1 + z + z ** 4 + z ** 7
    assert reduce_series(f, spec) == 1 + z


def two_series_spec():
    """The rewrite 2c -> -(c^2 + c^3) coming from a mock relation
    [2](c) = 2c + c^2 + c^3."""
    ring = plain_ring()
    vars = VariableTable([("c", 2, 8)])
    c = SparseSeries.variable(ring, vars, "c")
    rel = 2 * c + c ** 2 + c ** 3
    return ring, vars, c, QuotientSpec([(P_SERIES, "c", rel, 2)])


def test_p_series_rule_rewrites_even_coefficients():
    ring, vars, c, spec = two_series_spec()
    reduced = reduce_series(2 * c, spec)
    # the rewritten form has no c-linear term left and every coefficient
    # in the residue window 0..1
    assert (1,) not in reduced.terms
    for sc in reduced.scalars():
        assert sc.as_number() in (0, 1)
    # odd coefficients stay in the 0..1 residue window
    assert reduce_series(c, spec) == c


def test_reduce_is_idempotent():
    ring, vars, c, spec = two_series_spec()
    samples = [6 * c + 4 * c ** 2, c ** 2 * 8 - c, 5 * c + 2 * c ** 4]
    for f in samples:
        once = reduce_series(f, spec)
        assert reduce_series(once, spec) == once


@settings(max_examples=40)
@given(st.lists(st.integers(-8, 8), min_size=1, max_size=6))
def test_reduce_idempotent_random(coeffs):
    ring, vars, c, spec = two_series_spec()
    f = SparseSeries(ring, vars,
                     {(e + 1,): ring.from_number(v)
                      for e, v in enumerate(coeffs) if v})
    once = reduce_series(f, spec)
    assert reduce_series(once, spec) == once


def test_reduce_preserves_class():
    # f - reduce(f) must be a multiple of the relation: check by
    # substituting a root of the relation is overkill here, so instead
    # verify the congruence through the rewrite of the difference itself
    ring, vars, c, spec = two_series_spec()
    f = 6 * c + 4 * c ** 2
    assert reduce_series(f - reduce_series(f, spec), spec).is_zero()


def test_homogeneity_predicate():
    ring = make_ring(BP_RATIONAL, 2, N=2)
    vars = VariableTable([("z", 2)])
    v1 = ring.gen("v_1")
    f = SparseSeries(ring, vars, {(2,): v1, (3,): v1 * v1})
    assert f.is_homogeneous(2)
    g = SparseSeries(ring, vars, {(2,): v1, (3,): v1})
    assert not g.is_homogeneous()

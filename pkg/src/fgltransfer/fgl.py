"""Formal group laws for BP and Morava K(s).

Both constructions go through the p-typical logarithm over exact
rationals: F(x,y) = exp(log x + log y), with exp the compositional
reversion of log.  The BP law is re-expressed in the Hazewinkel v-basis;
the Morava law is checked for p-integrality and reduced mod p.
"""

from __future__ import annotations

from fractions import Fraction

from .coefficients import (
    BP_RATIONAL, MORAVA_K, make_ring, rational_ring, to_v_basis,
    integrality_check, Scalar, RingError,
)
from .series import (
    SparseSeries, VariableTable, SeriesError, reversion,
)

BP_LOG = "bp-log"
HONDA_MOD_P = "honda-mod-p"


class FormalGroupLaw:
    """A bivariate series F(x,y) with truncation metadata.

    For provenance honda-mod-p the rational-stage log and exp (univariate
    in x over Q_(p)[v_s]) are kept for downstream pipelines.
    """

    def __init__(self, ring, F, truncation, provenance, p, s=None,
                 log_q=None, exp_q=None, ring_q=None):
        self.ring = ring
        self.F = F
        self.truncation = truncation
        self.provenance = provenance
        self.p = p
        self.s = s
        self.log_q = log_q
        self.exp_q = exp_q
        self.ring_q = ring_q

    def apply(self, a, b):
        """F(a, b) for series a, b sharing a variable table and this
        law's coefficient ring."""
        return self.F.substitute({"x": a, "y": b})

    def __repr__(self):
        return "FormalGroupLaw(%s, p=%d%s)" % (
            self.provenance, self.p, ", s=%d" % self.s if self.s else "")


class QSeries:
    """[q](z), the q-fold iterated formal sum of z."""

    def __init__(self, q, series):
        self.q = q
        self.series = series

    def __repr__(self):
        return "[%d](z) = %r" % (self.q, self.series)


# -- logarithms -------------------------------------------------------


def bp_log_series(ring, vars, name, truncation):
    """log x = sum_{n>=0} m_n x^{p^n} (m_0 = 1), truncated."""
    p = ring.p
    x = SparseSeries.variable(ring, vars, name, truncation=truncation)
    out = x
    n = 1
    while 2 * p ** n <= truncation and n <= ring.num_generators:
        out = out + SparseSeries.variable(
            ring, vars, name, exp=p ** n,
            coeff=ring.gen("m_%d" % n), truncation=truncation)
        n += 1
    return out


def morava_log_series(ring_q, p, s, vars, name, truncation):
    """Graded height-s logarithm sum_i v_s^{e_i} x^{p^{is}} / p^i over the
    p-local rationals, e_i = (p^{is}-1)/(p^s-1)."""
    x = SparseSeries.variable(ring_q, vars, name, truncation=truncation)
    out = x
    i = 1
    vname = "v_%d" % s
    while 2 * p ** (i * s) <= truncation:
        e_i = (p ** (i * s) - 1) // (p ** s - 1)
        coeff = ring_q.gen(vname, e_i, Fraction(1, p ** i))
        out = out + SparseSeries.variable(ring_q, vars, name, exp=p ** (i * s),
                                          coeff=coeff, truncation=truncation)
        i += 1
    return out


def _mod_p_scalar_map(ring_q, ring_k):
    """Map a p-integral rational scalar over Q_(p)[v_s] to K(s)."""
    def fn(sc):
        acc = ring_k.zero()
        for exps, c in sc.terms.items():
            if c.denominator % ring_k.p == 0:
                raise RingError(
                    "coefficient %s is not %d-integral" % (c, ring_k.p))
            t = (c.numerator * pow(c.denominator, -1, ring_k.p)) % ring_k.p
            if t:
                acc = acc + ring_k.gen("v_%d" % ring_k.s, exps[0], t)
        return acc
    return fn


# -- constructors -----------------------------------------------------


def bp_fgl(p, N, order, v_basis=True):
    """The BP formal group law F = exp(log x + log y) over BPRational,
    truncated at total polynomial degree `order` in (x, y)."""
    if order < 2:
        raise SeriesError("order must be at least 2")
    ring = make_ring(BP_RATIONAL, p, N=N)
    trunc = 2 * order
    vars1 = VariableTable([("x", 2)])
    vars2 = VariableTable([("x", 2), ("y", 2)])
    log1 = bp_log_series(ring, vars1, "x", trunc)
    exp1 = reversion(log1, "x")
    logx = bp_log_series(ring, vars2, "x", trunc)
    logy = bp_log_series(ring, vars2, "y", trunc)
    F = exp1.substitute({"x": logx + logy})
    if v_basis:
        F = F.map_scalars(to_v_basis)
    return FormalGroupLaw(ring, F, trunc, BP_LOG, p,
                          log_q=log1, exp_q=exp1, ring_q=ring)


def morava_fgl(p, s, order=None, x_cap=None, y_cap=None):
    """The K(s) formal group law, reduced mod p.

    Either `order` (total polynomial degree bound) or per-variable caps
    must be given; caps allow the asymmetric truncations the sigma
    expansions need (large x-cap, z-sized y-cap).
    """
    if order is None:
        if x_cap is None or y_cap is None:
            raise SeriesError("need order or both caps")
        order = x_cap + y_cap
    trunc = 2 * order
    vname = "v_%d" % s
    ring_q = rational_ring(p, (vname,), {vname: -2 * (p ** s - 1)})
    ring_k = make_ring(MORAVA_K, p, s=s)
    # the univariate table is the composition slot of exp and must not be
    # capped; caps only restrict the final (x, y) window
    vars1 = VariableTable([("x", 2)])
    vars2 = VariableTable([("x", 2, x_cap), ("y", 2, y_cap)])
    log1 = morava_log_series(ring_q, p, s, vars1, "x", trunc)
    exp1 = reversion(log1, "x")
    logx = morava_log_series(ring_q, p, s, vars2, "x", trunc)
    logy = morava_log_series(ring_q, p, s, vars2, "y", trunc)
    F_q = exp1.substitute({"x": logx + logy})
    for sc in F_q.scalars():
        for c in sc.terms.values():
            if c.denominator % p == 0:
                raise RingError("Morava FGL coefficient %s not p-integral" % c)
    F = F_q.map_scalars(_mod_p_scalar_map(ring_q, ring_k), ring=ring_k)
    return FormalGroupLaw(ring_k, F, trunc, HONDA_MOD_P, p, s=s,
                          log_q=log1, exp_q=exp1, ring_q=ring_q)


# -- formal sums and q-series -----------------------------------------


def formal_sum(F, args):
    """Left-associated iterate F(...F(a_1,a_2)...,a_m)."""
    if not args:
        raise SeriesError("formal_sum needs at least one summand")
    out = args[0]
    for a in args[1:]:
        out = F.apply(out, a)
    return out


def q_series(F, q, order, cap=None):
    """[q](z) in a fresh univariate table z of degree 2."""
    if q < 1:
        raise SeriesError("q must be >= 1")
    vars = VariableTable([("z", 2, cap)])
    z = SparseSeries.variable(F.ring, vars, "z", truncation=2 * order)
    out = z
    for _ in range(q - 1):
        out = F.apply(out, z)
    return QSeries(q, out)


def fgl_axiom_check(F, max_degree=None):
    """Verify unit, commutativity and associativity within truncation."""
    trunc = F.truncation if max_degree is None else 2 * max_degree
    vars3 = VariableTable([("x", 2), ("y", 2), ("w", 2)])
    x = SparseSeries.variable(F.ring, vars3, "x", truncation=trunc)
    y = SparseSeries.variable(F.ring, vars3, "y", truncation=trunc)
    w = SparseSeries.variable(F.ring, vars3, "w", truncation=trunc)
    zero = SparseSeries(F.ring, vars3, None, trunc)
    unit = F.apply(x, zero) == x and F.apply(zero, y) == y
    comm = F.apply(x, y) == F.apply(y, x)
    assoc = F.apply(F.apply(x, y), w) == F.apply(x, F.apply(y, w))
    return {
        "unit": unit,
        "commutativity": comm,
        "associativity": assoc,
        "pass": unit and comm and assoc,
    }


def lemma53_congruence_check(p, s):
    """For s > 1: F(x,y) = x + y - v_s sum_{0<j<p} p^{-1} binom(p,j)
    x^{j p^{s-1}} y^{(p-j) p^{s-1}} modulo (x^{p^{2(s-1)}}, y^{p^{2(s-1)}})
    and modulo v_s^{1 + p^{s-1}}."""
    if s < 2:
        raise SeriesError("the congruence concerns s > 1")
    bound = p ** (2 * (s - 1))
    F = morava_fgl(p, s, x_cap=bound - 1, y_cap=bound - 1)
    ring = F.ring
    vars = F.F.vars
    trunc = F.F.truncation
    rhs = (SparseSeries.variable(ring, vars, "x", truncation=trunc)
           + SparseSeries.variable(ring, vars, "y", truncation=trunc))
    from math import comb
    for j in range(1, p):
        coeff = ring.gen("v_%d" % s, 1, -(comb(p, j) // p))
        term = SparseSeries.variable(ring, vars, "x", j * p ** (s - 1),
                                     coeff=coeff, truncation=trunc)
        term = term * SparseSeries.variable(ring, vars, "y",
                                            (p - j) * p ** (s - 1),
                                            truncation=trunc)
        rhs = rhs + term
    diff = F.F - rhs
    v_bound = 1 + p ** (s - 1)
    offenders = {exps: sc for exps, sc in diff.terms.items()
                 if any(e < v_bound for (e,) in sc.terms)}
    return {"holds": not offenders, "offending_terms": offenders}

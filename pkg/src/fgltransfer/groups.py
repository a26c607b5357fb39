"""Stable Euler classes Tr*(1) and ring presentations for families of
finite groups: cyclic groups, products, the symmetric group on p letters,
wreath products Z/p wr Z/p^n and the semidirect products (Z/p)^n x| Z/p.

Everything here reduces to the Quillen formula [q](z)/z, the norm
decomposition of symmetric classes, and the transfer expressions built in
the solver module.
"""

from __future__ import annotations

from math import comb, factorial

from .coefficients import MORAVA_K, make_ring
from .series import SparseSeries, VariableTable, SeriesError
from .fgl import bp_fgl, morava_fgl, q_series
from .solver import (
    SolverError, TransferExpression, cover_table, morava_theory,
    transfer_of_norm_symmetric,
)
from .symfun import express_in_elementary, omega_power, x_table


class GroupError(Exception):
    pass


FAMILIES = ("cyclic", "product", "sigma_p", "wreath", "semidirect")


class GroupDescriptor:
    """A group from one of the supported families, with its parameters.

    cyclic: Z/q.  product: Z/q_1 x ... x Z/q_m.  sigma_p: the symmetric
    group on p letters.  wreath: Z/p wr Z/p^n.  semidirect: (Z/p)^n x| Z/p
    with the action 1 - alpha = T on Z/p[T]/(T^n), 1 <= n < p.
    """

    def __init__(self, family, p=None, n=None, q=None, orders=None):
        if family not in FAMILIES:
            raise GroupError("unknown family %r" % (family,))
        if family == "cyclic" and (q is None or q < 1):
            raise GroupError("cyclic needs q >= 1")
        if family == "product" and not orders:
            raise GroupError("product needs a nonempty list of orders")
        if family in ("sigma_p", "wreath", "semidirect") and p is None:
            raise GroupError("%s needs a prime p" % family)
        if family == "wreath" and (n is None or n < 1):
            raise GroupError("wreath needs n >= 1")
        if family == "semidirect":
            if n is None or not 1 <= n <= p - 1:
                raise GroupError(
                    "semidirect needs 1 <= n <= p-1 (n = p is the wreath "
                    "product; the orbit-class formula needs free orbits)")
        self.family = family
        self.p = p
        self.n = n
        self.q = q
        self.orders = tuple(orders) if orders else None

    def __repr__(self):
        return "GroupDescriptor(%s, p=%r, n=%r, q=%r, orders=%r)" % (
            self.family, self.p, self.n, self.q, self.orders)


class RingPresentation:
    """Generators, relations and (optionally) an explicit module basis for
    the theory's value on a classifying space.

    `data` carries attached distinguished elements such as Tr*(1);
    `unknowns` lists relation terms the computation cannot resolve, kept
    as human-readable strings rather than guessed series."""

    def __init__(self, theory, generators, relations, basis=None, rank=None,
                 data=None, unknowns=None):
        for rel in relations:
            if not rel.is_homogeneous():
                raise GroupError("inhomogeneous relation %r" % (rel,))
        if basis is not None and rank is not None and len(basis) != rank:
            raise GroupError("stated rank %d != basis length %d"
                             % (rank, len(basis)))
        self.theory = theory
        self.generators = list(generators)
        self.relations = list(relations)
        self.basis = basis
        self.rank = rank
        self.data = dict(data or {})
        self.unknowns = list(unknowns or [])

    def __repr__(self):
        return "RingPresentation(%s, gens=%r, rank=%r)" % (
            self.theory, [g[0] for g in self.generators], self.rank)


# -- Quillen formula and products -------------------------------------


def quillen_euler(q, F, order, cap=None):
    """Tr*_{Z/q}(1) = [q](z)/z, by exact division of the q-series."""
    if q < 1:
        raise GroupError("q must be >= 1")
    # the cap is a property of the quotient the answer lives in, so it
    # must be applied after the division: capping [q](z) first would drop
    # the top term z^{q^s} and with it the whole class
    qs = q_series(F, q, order, cap=None if cap is None else cap + 1)
    out = qs.series.divide_by_var("z")
    check = out * SparseSeries.variable(F.ring, out.vars, "z",
                                        truncation=out.truncation)
    if check != qs.series:
        raise GroupError("division of [%d](z) by z was not exact" % q)
    if cap is not None:
        out = SparseSeries(F.ring, VariableTable([("z", 2, cap)]),
                           out.terms, out.truncation)
    return out


def product_euler(orders, F, order, caps=None):
    """Tr* for a product of cyclic groups: prod_i [q_i](z_i)/z_i, using
    the smash decomposition of the transfer."""
    if not orders:
        raise GroupError("need at least one cyclic factor")
    m = len(orders)
    caps = caps or [None] * m
    mvars = VariableTable([("z_%d" % (i + 1), 2, caps[i]) for i in range(m)])
    out = SparseSeries.constant(F.ring, mvars, F.ring.one())
    for i, q in enumerate(orders):
        factor_z = quillen_euler(q, F, order, cap=caps[i])
        acc = {}
        for (ez,), sc in factor_z.terms.items():
            exps = [0] * m
            exps[i] = ez
            acc[tuple(exps)] = sc
        out = out * SparseSeries(F.ring, mvars, acc)
    return out


# -- Sigma_p ----------------------------------------------------------


def nilpotence_exponent(p, s):
    """m_s = (p^s - 1)/(p - 1) + 1, the nilpotence degree of y."""
    return (p ** s - 1) // (p - 1) + 1


def sigma_p_presentation(p, s):
    """K(s) of the classifying space of Sigma_p: a truncated polynomial
    ring on one generator y of degree 2(p-1), relation y^{m_s}, with the
    stable Euler class Tr*(1) = -v_s y^{m_s - 1} attached."""
    m_s = nilpotence_exponent(p, s)
    ring = make_ring(MORAVA_K, p, s=s)
    yvars = VariableTable([("y", 2 * (p - 1))])
    relation = SparseSeries.variable(ring, yvars, "y", exp=m_s)
    tr_one = SparseSeries.variable(
        ring, yvars, "y", exp=m_s - 1, coeff=ring.gen("v_%d" % s, 1, p - 1))
    basis = ["y^%d" % i for i in range(m_s)]
    return RingPresentation(
        "K(%d)" % s, [("y", 2 * (p - 1))], [relation],
        basis=basis, rank=m_s, data={"tr_one": tr_one, "m_s": m_s})


def _bp_scalar_to_ks(ring_k, s):
    """Reduce a BP v-basis scalar to K(s): kill v_n for n != s, reduce
    the (p-local) rational coefficient mod p."""
    p = ring_k.p

    def fn(sc):
        acc = ring_k.zero()
        for exps, c in sc.terms.items():
            keep = True
            ve = 0
            for pos, e in enumerate(exps):
                name = sc.ring.gens[pos]
                if not e:
                    continue
                if name == "v_%d" % s:
                    ve = e
                else:
                    keep = False
            if not keep:
                continue
            if c.denominator % p == 0:
                raise GroupError("non-%d-local coefficient %s" % (p, c))
            t = (c.numerator * pow(c.denominator, -1, p)) % p
            if t:
                acc = acc + ring_k.gen("v_%d" % s, ve, t)
        return acc
    return fn


def bp_sigma_p_relation_check(p, s):
    """Cross-check of the Sigma_p stable Euler class: reduce the BP class
    (p-1)! [p](z)/z to K(s) and compare with the image of -v_s y^{m_s-1}
    under y -> z^{p-1}.  Wilson's theorem (p-1)! = -1 mod p makes the two
    agree."""
    order = p ** s
    F = bp_fgl(p, max(s, 1), order)
    euler = quillen_euler(p, F, order).scalar_mul(factorial(p - 1))
    ring_k = make_ring(MORAVA_K, p, s=s)
    reduced = euler.map_scalars(_bp_scalar_to_ks(ring_k, s), ring=ring_k)
    m_s = nilpotence_exponent(p, s)
    expected = SparseSeries.variable(
        ring_k, euler.vars, "z", exp=(p - 1) * (m_s - 1),
        coeff=ring_k.gen("v_%d" % s, 1, p - 1))
    return {
        "reduced": reduced,
        "expected": expected,
        "match": reduced == expected,
        "wilson_unit": factorial(p - 1) % p,
    }


# -- wreath products --------------------------------------------------


def _lift_symmetric_to_cover(g, ring, p):
    """Lift a symmetric class written in s_1..s_p to the cover basis:
    each monomial keeps its scalar, s_j factors become c_j, and the class
    is tagged by the least j < p dividing it (the omega-channel), or as a
    pure c_p monomial.  Returns (series, channels) where channels maps
    "omega_j"/"cp" tags to the cover-basis cofactors."""
    cvars = cover_table(p)
    svars = g.vars
    total = SparseSeries(ring, cvars, None)
    channels = {}
    for exps, sc in g.terms.items():
        new = [0] * len(cvars)
        tag = "cp"
        for name, e in zip(svars.names, exps):
            if e:
                new[cvars.index("c" + name[1:])] = e
        for j in range(1, p):
            if exps[svars.index("s%d" % j)]:
                tag = "omega_%d" % j
                break
        mono = SparseSeries(ring, cvars, {tuple(new): sc})
        total = total + mono
        channels[tag] = channels.get(tag, SparseSeries(ring, cvars, None)) \
            + mono
    return total, channels


def wreath_euler(p, n, s):
    """Stable Euler class of Z/p wr Z/p^n in K(s): the product of the
    cyclic Euler classes [p^n](z_i)/z_i over the p copies is symmetric,
    so it is expressed in elementary symmetric classes and lifted to the
    cover basis (sigma_j -> c_j)."""
    if n < 1:
        raise GroupError("n must be >= 1")
    nilp = p ** (n * s)
    F = morava_fgl(p, s, order=nilp + 1)
    factor = quillen_euler(p ** n, F, nilp, cap=nilp)
    factor = SparseSeries(F.ring, VariableTable([("z", 2, nilp - 1)]),
                          factor.terms)
    ring = F.ring
    xv = x_table(p, cap=nilp - 1)
    prod = SparseSeries.constant(ring, xv, ring.one())
    for i in range(p):
        acc = {}
        for (ez,), sc in factor.terms.items():
            exps = [0] * p
            exps[i] = ez
            acc[tuple(exps)] = sc
        prod = prod * SparseSeries(ring, xv, acc)
    g = express_in_elementary(prod)
    series, channels = _lift_symmetric_to_cover(g, ring, p)
    expr = TransferExpression("pi-cover", series)
    expr.channels = channels
    return expr


def _cyclic_orbit_representatives(p, modulus):
    """Lexicographically least representative of each cyclic-shift class
    of p-tuples over range(modulus) that are not constant."""
    reps = []
    seen = set()
    from itertools import product as iproduct
    for tup in iproduct(range(modulus), repeat=p):
        if tup in seen:
            continue
        orbit = {tup[k:] + tup[:k] for k in range(p)}
        seen.update(orbit)
        if len(set(tup)) > 1:
            reps.append(min(orbit))
    return reps


def wreath_basis(p, s, n):
    """Module basis of K(s) of the classifying space of Z/p wr Z/p^n:
    the gamma^i (z^j)^p family plus one orbit class per non-constant
    cyclic class of p-tuples of z-exponents.  The rank is the Burnside
    count p^s p^{ns} + (p^{nsp} - p^{ns})/p."""
    nilp = p ** (n * s)
    free_part = ["gamma^%d (z^%d)xp" % (i, j)
                 for i in range(p ** s) for j in range(nilp)]
    orbit_reps = _cyclic_orbit_representatives(p, nilp)
    orbit_part = ["orbit" + repr(rep) for rep in orbit_reps]
    rank = p ** s * nilp + (nilp ** p - nilp) // p
    basis = free_part + orbit_part
    if len(basis) != rank:
        raise GroupError("enumerated basis size %d != Burnside rank %d"
                         % (len(basis), rank))
    ring = make_ring(MORAVA_K, p, s=s)
    generators = [("c", 2), ("c1tilde", 2), ("c2", 4)]
    relations = []
    unknowns = []
    if p == 2:
        pvars = VariableTable([("c", 2), ("c1tilde", 2), ("c2", 4)])
        c = SparseSeries.variable(ring, pvars, "c")
        c1t = SparseSeries.variable(ring, pvars, "c1tilde")
        relations.append(c1t * c)
        unknowns.append("c1tilde^%d = 0 modulo terms divisible by c "
                        "(extension terms unresolved)" % nilp)
        unknowns.append("c2^%d = 0 modulo terms divisible by c "
                        "(extension terms unresolved)" % nilp)
    return RingPresentation(
        "K(%d)" % s, generators, relations, basis=basis, rank=rank,
        data={"orbit_count": len(orbit_reps)}, unknowns=unknowns)


# -- semidirect products ----------------------------------------------


def semidirect_euler(p, n, s, x_order=None):
    """Stable Euler class of (Z/p)^n x| Z/p: the cyclic-subgroup Euler
    class z_1^{p^s-1} ... z_n^{p^s-1} pulls back from the orbit sum
    omega_n(p^s-1) up to the unit number of orbit representatives,
    binom(p,n)/p = (-1)^{n-1}/n mod p, so
    Tr*(1) = unit^{-1} Tr*(omega_n(p^s-1)) via the norm decomposition."""
    desc = GroupDescriptor("semidirect", p=p, n=n)
    count = (comb(p, n) // p) % p
    if count == 0:
        raise GroupError("orbit count vanished mod p")
    unit = pow(count, -1, p)
    a = omega_power(p, n, p ** s - 1,
                    vars=x_table(p, cap=p ** s - 1))
    theory = morava_theory(p, s, x_order)
    expr = transfer_of_norm_symmetric(a, theory)
    # Tr_1*(1) = prod_i v_s z_i^{p^s-1}; the v_s^n factor restores the
    # stable Euler class to topological degree 0
    vs_n = SparseSeries.constant(theory.ring, theory.vars,
                                 theory.ring.gen("v_%d" % s, n))
    out = TransferExpression(expr.basis,
                             (expr.series * vs_n).scalar_mul(unit))
    out.unit = unit
    out.orbit_count = count
    return out


def stable_euler(desc, s, order=None):
    """Dispatch a GroupDescriptor to the right Euler-class pipeline over
    K(s).  Returns a SparseSeries or TransferExpression."""
    if desc.family == "cyclic":
        nilp = p_s_nilpotence(desc.q, s)
        F = morava_fgl(prime_of(desc.q), s, order=(order or nilp + 1))
        return quillen_euler(desc.q, F, order or nilp, cap=nilp - 1)
    if desc.family == "product":
        p = prime_of(desc.orders[0])
        nilps = [p_s_nilpotence(q, s) for q in desc.orders]
        F = morava_fgl(p, s, order=(order or max(nilps) + 1))
        return product_euler(desc.orders, F, order or max(nilps),
                             caps=[m - 1 for m in nilps])
    if desc.family == "sigma_p":
        return sigma_p_presentation(desc.p, s).data["tr_one"]
    if desc.family == "wreath":
        return wreath_euler(desc.p, desc.n, s)
    if desc.family == "semidirect":
        return semidirect_euler(desc.p, desc.n, s)
    raise GroupError("unhandled family %r" % (desc.family,))


def prime_of(q):
    """The prime a power q = p^n is built on."""
    if q < 2:
        raise GroupError("need q >= 2")
    for p in (2, 3, 5, 7, 11, 13):
        if q % p == 0:
            m = q
            while m % p == 0:
                m //= p
            if m != 1:
                raise GroupError("%d is not a prime power" % q)
            return p
    raise GroupError("%d has no small prime factor" % q)


def p_s_nilpotence(q, s):
    """The z-nilpotence degree q^s of K(s) of the cyclic group Z/q."""
    return q ** s

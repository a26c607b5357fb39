"""Elementary symmetric polynomials, cyclic orbit sums, norm maps and
expression of symmetric polynomials in the elementary ones.

Conventions: the ambient polynomial variables are x_1..x_n (each of
topological degree 2); elementary symmetric values live in s_1..s_n with
deg s_k = 2k.  All algorithms here are division-free, so they work over
any coefficient ring, modular or rational.
"""

from __future__ import annotations

from itertools import combinations, permutations
from math import comb

from .coefficients import rational_ring
from .series import SparseSeries, VariableTable, SeriesError


def plain_ring():
    """Rational coefficients, no generators (enough for combinatorics)."""
    return rational_ring(2, (), {})


def x_table(n, cap=None):
    return VariableTable([("x_%d" % (i + 1), 2, cap) for i in range(n)])


def s_table(n):
    return VariableTable([("s%d" % (k + 1), 2 * (k + 1)) for k in range(n)])


def elementary(k, n, ring=None, vars=None):
    """The elementary symmetric polynomial sigma_k(x_1,...,x_n)."""
    if not 0 <= k <= n:
        raise SeriesError("need 0 <= k <= n")
    ring = ring or plain_ring()
    vars = vars or x_table(n)
    one = ring.one()
    terms = {}
    for subset in combinations(range(n), k):
        exps = [0] * len(vars)
        for i in subset:
            exps[vars.index("x_%d" % (i + 1))] = 1
        terms[tuple(exps)] = one
    return SparseSeries(ring, vars, terms)


class OrbitBasis:
    """One lexicographically least squarefree degree-k monomial per
    cyclic orbit; their cyclic norm is sigma_k."""

    def __init__(self, p, k, representatives):
        self.p = p
        self.k = k
        self.representatives = representatives

    def series(self, ring=None, vars=None, power=1):
        ring = ring or plain_ring()
        vars = vars or x_table(self.p)
        terms = {}
        one = ring.one()
        for subset in self.representatives:
            exps = [0] * len(vars)
            for i in subset:
                exps[vars.index("x_%d" % (i + 1))] = power
            terms[tuple(exps)] = one
        return SparseSeries(ring, vars, terms)


def omega(p, k):
    """Orbit representatives for the free cyclic action on squarefree
    degree-k monomials, 1 <= k <= p-1."""
    if not 1 <= k <= p - 1:
        raise SeriesError("omega needs 1 <= k <= p-1 (free orbits)")
    seen = set()
    reps = []
    for subset in combinations(range(p), k):
        if subset in seen:
            continue
        orbit = set()
        for shift in range(p):
            rotated = tuple(sorted((i + shift) % p for i in subset))
            orbit.add(rotated)
        if len(orbit) != p:
            raise SeriesError("orbit of %r is not free" % (subset,))
        seen.update(orbit)
        reps.append(min(orbit))
    expected = comb(p, k) // p
    if len(reps) != expected:
        raise SeriesError("orbit count %d != binom(p,k)/p = %d"
                          % (len(reps), expected))
    return OrbitBasis(p, k, sorted(reps))


def omega_power(p, n, l, ring=None, vars=None):
    """omega_n with every variable exponent raised to l."""
    if l < 1:
        raise SeriesError("power l must be >= 1")
    return omega(p, n).series(ring=ring, vars=vars, power=l)


def _permute_terms(f, perm, index_of):
    """Apply a permutation of the x-variables to f's exponent tuples."""
    acc = {}
    for exps, sc in f.terms.items():
        new = list(exps)
        for i, j in enumerate(perm):
            new[index_of[j]] = exps[index_of[i]]
        key = tuple(new)
        if key in acc:
            acc[key] = acc[key] + sc
        else:
            acc[key] = sc
    return f.spawn(acc)


def _x_indices(f):
    names = [n for n in f.vars.names if n.startswith("x_")]
    return {i: f.vars.index("x_%d" % (i + 1)) for i in range(len(names))}, \
        len(names)


def norm(group, f):
    """Sum of f over the permutation action: the full symmetric group or
    the cyclic rotation group on x_1..x_p."""
    index_of, n = _x_indices(f)
    out = f.spawn({})
    if group == "cyclic":
        for shift in range(n):
            perm = tuple((i + shift) % n for i in range(n))
            out = out + _permute_terms(f, perm, index_of)
    elif group == "symmetric":
        for perm in permutations(range(n)):
            out = out + _permute_terms(f, perm, index_of)
    else:
        raise SeriesError("group must be 'cyclic' or 'symmetric'")
    return out


def is_symmetric(f, prefix="x_"):
    """True iff f is invariant under all variable transpositions."""
    idx = [f.vars.index(n) for n in f.vars.names if n.startswith(prefix)]
    for exps, sc in f.terms.items():
        for a in range(len(idx) - 1):
            b = a + 1
            swapped = list(exps)
            swapped[idx[a]], swapped[idx[b]] = exps[idx[b]], exps[idx[a]]
            other = f.terms.get(tuple(swapped))
            if other is None or other != sc:
                return False
    return True


def express_in_elementary(f, var_prefix="x_"):
    """Rewrite a symmetric polynomial in x_1..x_n as a polynomial in the
    elementary symmetric values s1..sn (classical greedy algorithm on
    lexicographic leading terms; division-free)."""
    xnames = [n for n in f.vars.names if n.startswith(var_prefix)]
    n = len(xnames)
    if not is_symmetric(f, var_prefix):
        raise SeriesError("input is not symmetric")
    svars = s_table(n)
    ring = f.ring
    out = SparseSeries(ring, svars, None, None)
    sigma = {k: elementary(k, n, ring=ring, vars=f.vars)
             for k in range(1, n + 1)}
    sigma_pow = {}

    def sigma_power(k, e):
        key = (k, e)
        got = sigma_pow.get(key)
        if got is None:
            got = sigma[k] ** e
            sigma_pow[key] = got
        return got

    idx = [f.vars.index(name) for name in xnames]
    work = f
    guard = 0
    while not work.is_zero():
        guard += 1
        if guard > 100000:
            raise SeriesError("express_in_elementary failed to terminate")
        lead = max(work.terms, key=lambda e: tuple(e[i] for i in idx))
        lam = [lead[i] for i in idx]
        if any(lam[i] < lam[i + 1] for i in range(n - 1)):
            raise SeriesError("leading term not dominant; input not symmetric?")
        coeff = work.terms[lead]
        s_exps = [0] * n
        for k in range(1, n):
            s_exps[k - 1] = lam[k - 1] - lam[k]
        s_exps[n - 1] = lam[n - 1]
        out = out + SparseSeries(
            ring, svars, {tuple(s_exps): coeff})
        piece = SparseSeries.constant(ring, f.vars, coeff, work.truncation)
        for k in range(1, n + 1):
            if s_exps[k - 1]:
                piece = piece * sigma_power(k, s_exps[k - 1])
        work = work - piece
    return out


def evaluate_elementary(g, n, ring=None, vars=None):
    """Substitute s_k -> sigma_k(x_1..x_n); inverse of
    express_in_elementary on its image."""
    ring = ring or g.ring
    vars = vars or x_table(n)
    assignment = {"s%d" % k: elementary(k, n, ring=ring, vars=vars)
                  for k in range(1, n + 1)}
    return g.substitute(assignment)


def decompose_norm_symmetric(a, group="cyclic"):
    """Write N(a) = sum_j s_j * a_j(s_1..s_p) for j < p, plus a pure-s_p
    channel.  Returns (list [a_1..a_{p-1}], sp_channel) where sp_channel
    collects the terms of N(a) involving only s_p (callers route those
    through Frobenius reciprocity)."""
    _, p = _x_indices(a)
    na = norm(group, a)
    g = express_in_elementary(na)
    svars = g.vars
    factors = [SparseSeries(a.ring, svars, None, None) for _ in range(p - 1)]
    sp_channel = SparseSeries(a.ring, svars, None, None)
    for exps, sc in g.terms.items():
        j = None
        for k in range(p - 1):
            if exps[svars.index("s%d" % (k + 1))]:
                j = k
                break
        if j is None:
            sp_channel = sp_channel + SparseSeries(a.ring, svars, {exps: sc})
        else:
            i = svars.index("s%d" % (j + 1))
            lowered = exps[:i] + (exps[i] - 1,) + exps[i + 1:]
            factors[j] = factors[j] + SparseSeries(a.ring, svars,
                                                   {lowered: sc})
    return factors, sp_channel

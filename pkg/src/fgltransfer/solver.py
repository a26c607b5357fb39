"""Transferred-Chern-class solvers.

Two pipelines:

* the all-p Morava K(s) lambda-solver: expand
  sigma_k(x, F(x,z), ..., F(x,(p-1)z)) over K(s)[z]/(z^{p^s}), then solve
  sigma_k = -sum_i lambda_i^(k) sigma_p^i + p^{-1} binom(p,k) x^k v_s z^{p^s-1}
  by back-substitution on the upper-triangular system given by the
  coefficients of x^{p}, x^{2p}, ..., x^{p^{s+1}};

* the p=2 BP delta-recurrence: from F(u_1,c)F(u_2,c) = c_2 derive
  c*c_1 = d_0 c + sum_{n>=2} d_n c c_1^n, then solve
  delta = d_0 + sum_{i>=2} d_i delta^i by c_2-adic iteration, giving
  Tr*(x) = c_1 - c + sum_j delta_j c_2^j.

The internal sign convention (delta_i = lambda_i, so that
Tr*(omega_k) = c_k + sum lambda_i c_p^i) is fixed once by the k=1 closed
form and applied uniformly; display layers may negate to match the
sigma_k-expansion view.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .coefficients import MORAVA_K, BP_RATIONAL, make_ring, Scalar, RingError
from .series import (
    SparseSeries, VariableTable, QuotientSpec, SeriesError,
    NILPOTENT, P_SERIES, reduce_series,
)
from .fgl import bp_fgl, morava_fgl, q_series
from .symfun import (
    elementary, decompose_norm_symmetric, express_in_elementary, s_table,
)


class SolverError(RuntimeError):
    """An internal consistency equation failed (residuals, base cases)."""


# ---------------------------------------------------------------------
# Morava side
# ---------------------------------------------------------------------

def xz_table(p, s, x_order):
    return VariableTable([("x", 2, x_order), ("z", 2, p ** s - 1)])


def z_table(p, s):
    return VariableTable([("z", 2, p ** s - 1)])


_sigma_cache = {}


def sigma_chern_all(p, s, x_order=None):
    """All sigma_k(x, F(x,z), ..., F(x,(p-1)z)) for k = 1..p at once,
    as series in (x, z) over K(s) with z^{p^s} = 0."""
    if x_order is None:
        x_order = p ** (s + 1)
    if x_order < p ** (s + 1):
        raise SeriesError("x_order must be at least p^(s+1) = %d"
                          % p ** (s + 1))
    key = (p, s, x_order)
    got = _sigma_cache.get(key)
    if got is not None:
        return got
    z_cap = p ** s - 1
    F = morava_fgl(p, s, x_cap=x_order, y_cap=z_cap)
    ring = F.ring
    vars = xz_table(p, s, x_order)
    trunc = F.F.truncation
    a1 = F.F.with_vars(vars, rename={"y": "z"}).with_truncation(trunc)
    iz = vars.index("z")
    args = [SparseSeries.variable(ring, vars, "x", truncation=trunc), a1]
    for i in range(2, p):
        scaled = {}
        for exps, sc in a1.terms.items():
            factor = pow(i, exps[iz], p)
            sc2 = sc.map_coefficients(lambda c, f=factor: c * f)
            if not sc2.is_zero():
                scaled[exps] = sc2
        args.append(a1.spawn(scaled))
    one = SparseSeries.constant(ring, vars, ring.one(), trunc)
    zero = SparseSeries(ring, vars, None, trunc)
    e = [one] + [zero] * p
    for a in args:
        for k in range(p, 0, -1):
            e[k] = e[k] + e[k - 1] * a
    result = {k: e[k] for k in range(1, p + 1)}
    _sigma_cache[key] = result
    return result


def sigma_chern_expansion(p, s, k, x_order=None):
    """sigma_k evaluated at (x, F(x,z), ..., F(x,(p-1)z)) over K(s)."""
    if not 1 <= k <= p:
        raise SeriesError("k must be in 1..p")
    return sigma_chern_all(p, s, x_order)[k]


def _project_z(series, zvars):
    """A series whose x-exponent is zero everywhere, viewed in z alone."""
    acc = {}
    ix = series.vars.index("x")
    iz = series.vars.index("z")
    for exps, sc in series.terms.items():
        if exps[ix]:
            raise SeriesError("series still involves x")
        acc[(exps[iz],)] = sc
    return SparseSeries(series.ring, zvars, acc)


_lambda_cache = {}


def morava_lambda(p, s, k, x_order=None):
    """Solve for lambda_i^(k), i = 0..p^s: the unique solution of
    sigma_k + sum_i lambda_i sigma_p^i = p^{-1} binom(p,k) x^k v_s z^{p^s-1}.

    lambda_0 is read off at x = 0; lambda_1..lambda_{p^s} come from the
    x^{ip} coefficients by back-substitution (the system is unipotent
    upper triangular); afterwards EVERY other x-coefficient is verified
    to vanish, which is the full residual check.
    Returns {i: series in z}, omitting zero entries.
    """
    if not 1 <= k <= p - 1:
        raise SeriesError("k must be in 1..p-1")
    key = (p, s, k, x_order)
    got = _lambda_cache.get(key)
    if got is not None:
        return got
    sig = sigma_chern_all(p, s, x_order)
    sigma_k, sigma_p = sig[k], sig[p]
    ring = sigma_k.ring
    vars = sigma_k.vars
    trunc = sigma_k.truncation
    zvars = z_table(p, s)
    n = p ** s

    t = comb(p, k) // p
    vtop = ring.gen("v_%d" % s, 1, t)
    const = (SparseSeries.variable(ring, vars, "x", k, coeff=vtop,
                                   truncation=trunc)
             * SparseSeries.variable(ring, vars, "z", p ** s - 1,
                                     truncation=trunc))

    # at x = 0 only the i = 0 summand survives, so lambda_0 = -sigma_k|_{x=0}
    lam0_xz = sigma_k.evaluate_var_zero("x")
    lam0 = -_project_z(lam0_xz, zvars)
    base = sigma_k - lam0_xz - const

    powers = [SparseSeries.constant(ring, vars, ring.one(), trunc)]
    for _ in range(n):
        powers.append(powers[-1] * sigma_p)

    # coefficient buckets of x in each sigma_p^j, projected to z
    mcol = []
    for j in range(n + 1):
        buckets = powers[j].coefficients_of("x")
        mcol.append({e: _project_z(srs, zvars)
                     for e, srs in buckets.items()})
    bvec = {e: _project_z(srs, zvars)
            for e, srs in base.coefficients_of("x").items()}

    zero_z = SparseSeries(ring, zvars, None)
    lam = {i: zero_z for i in range(1, n + 1)}
    for i in range(n, 0, -1):
        rhs = -bvec.get(i * p, zero_z)
        for j in range(i + 1, n + 1):
            mij = mcol[j].get(i * p)
            if mij is not None and not lam[j].is_zero():
                rhs = rhs - mij * lam[j]
        mii = mcol[i].get(i * p)
        if mii is None or mii.constant_scalar() != ring.one():
            raise SolverError(
                "diagonal entry at i=%d is not unipotent" % i)
        lam[i] = rhs * mii.inverse() if rhs else rhs

    # full residual: the defining equation must hold identically
    residual = base
    for i in range(1, n + 1):
        if not lam[i].is_zero():
            residual = residual + lam[i].with_vars(vars).with_truncation(
                trunc) * powers[i]
    if not residual.is_zero():
        raise SolverError("lambda residual is nonzero for (p,s,k)=(%d,%d,%d)"
                          % (p, s, k))

    out = {}
    if not lam0.is_zero():
        out[0] = lam0
    for i in range(1, n + 1):
        if not lam[i].is_zero():
            out[i] = lam[i]
    _lambda_cache[key] = out
    return out


class DeltaTable:
    """The matrix {delta_i^(k)} over a fixed theory; entries are series
    in z (Morava, z^{p^s} = 0) or in c mod [2](c) (BP, p = 2)."""

    def __init__(self, theory, p, entries, bound, s=None):
        self.theory = theory
        self.p = p
        self.s = s
        self.entries = entries
        self.bound = bound

    def entry(self, k, i):
        return self.entries.get((k, i))

    def row(self, k):
        return {i: v for (kk, i), v in self.entries.items() if kk == k}


def morava_delta_table(p, s, x_order=None):
    entries = {}
    for k in range(1, p):
        for i, val in morava_lambda(p, s, k, x_order).items():
            entries[(k, i)] = val
    return DeltaTable("MoravaK", p, entries, p ** s, s=s)


# ---------------------------------------------------------------------
# Transfer expressions
# ---------------------------------------------------------------------

def cover_table(p):
    """Generators of the pi-cover basis: c and c_1..c_p."""
    entries = [("c", 2)]
    for i in range(1, p + 1):
        entries.append(("c%d" % i, 2 * i))
    return VariableTable(entries)


class TransferExpression:
    """A class in the generators {c, c_1..c_p} (pi-cover)."""

    def __init__(self, basis, series):
        self.basis = basis
        self.series = series

    def __eq__(self, other):
        return (isinstance(other, TransferExpression)
                and self.basis == other.basis and self.series == other.series)

    def __repr__(self):
        return "TransferExpression(%s: %r)" % (self.basis, self.series)


def _z_to_cover(zseries, ring, cvars, extra_exps=None):
    """Rename z -> c into the cover table, optionally multiplying by a
    fixed cover monomial."""
    acc = {}
    for (ez,), sc in zseries.terms.items():
        exps = [0] * len(cvars)
        exps[cvars.index("c")] = ez
        if extra_exps:
            for name, e in extra_exps.items():
                exps[cvars.index(name)] += e
        key = tuple(exps)
        acc[key] = acc.get(key, ring.zero()) + sc
    return SparseSeries(ring, cvars, acc)


def morava_transfer_omega(p, s, k, x_order=None):
    """Tr*(omega_k) = c_k + sum_i lambda_i^(k) c_p^i in the pi-cover basis."""
    lam = morava_lambda(p, s, k, x_order)
    ring = make_ring(MORAVA_K, p, s=s)
    cvars = cover_table(p)
    out = SparseSeries.variable(ring, cvars, "c%d" % k)
    cp = "c%d" % p
    for i, val in lam.items():
        out = out + _z_to_cover(val, ring, cvars,
                                extra_exps={cp: i} if i else None)
    return TransferExpression("pi-cover", out)


def sigma_cover_transfer(p, s, k, x_order=None):
    """The Sigma_p-basis class: ct_k = k!(p-k)! c_k + sum delta~_i c_p^i,
    delta~_i = k!(p-k)! delta_i, expressed in pi-cover generators."""
    expr = morava_transfer_omega(p, s, k, x_order)
    factor = (factorial(k) * factorial(p - k)) % p
    return TransferExpression("sigma-cover", expr.series.scalar_mul(factor))


def transfer_c1(p, s):
    """Prop-style closed form:
    Tr*(x) = c_1 - v_s sum_{j=1}^{s-1} c^{p^s - p^j} c_p^{p^{j-1}}."""
    ring = make_ring(MORAVA_K, p, s=s)
    cvars = cover_table(p)
    out = SparseSeries.variable(ring, cvars, "c1")
    cp = cvars.index("c%d" % p)
    ic = cvars.index("c")
    for j in range(1, s):
        exps = [0] * len(cvars)
        exps[ic] = p ** s - p ** j
        exps[cp] = p ** (j - 1)
        out = out + SparseSeries(
            ring, cvars,
            {tuple(exps): ring.gen("v_%d" % s, 1, -1)})
    return TransferExpression("pi-cover", out)


# ---------------------------------------------------------------------
# BP side, p = 2
# ---------------------------------------------------------------------

def cc2_table(c_cap, c2_cap):
    return VariableTable([("c", 2, c_cap), ("c1", 2, None), ("c2", 4, c2_cap)])


_bp_cache = {}


def _bp_two_series(F, c_cap):
    """[2](c) as a series in c, for use as a rewrite relation."""
    qs = q_series(F, 2, order=c_cap + 1, cap=c_cap + 1)
    return qs.series


def bp_d_series_p2(c_order=8, c2_order=4, N=3, fgl_order=None):
    """The coefficients d_n(c, c_2) of c*c_1 = d_0 c + sum_{n>=2} d_n c c_1^n,
    derived from F(u_1,c)F(u_2,c) = c_2 over BP at p = 2.

    Returns (d, context) with d a map n -> series in (c, c1, c2) free of
    c1, and context carrying the FGL, the [2](c) relation and the
    quotient spec used."""
    if fgl_order is None:
        fgl_order = c_order + 2 * c2_order + 2
    # the truncated log must carry every m_n with 2^n <= fgl_order, or
    # the v-basis coefficients stop being 2-integral at high degree
    while 2 ** (N + 1) <= fgl_order:
        N += 1
    key = (c_order, c2_order, N, fgl_order)
    got = _bp_cache.get(key)
    if got is not None:
        return got
    F = bp_fgl(2, N, fgl_order)
    ring = F.ring

    uvars = VariableTable([("x_1", 2), ("x_2", 2), ("c", 2, c_order)])
    trunc = 2 * fgl_order
    u1 = SparseSeries.variable(ring, uvars, "x_1", truncation=trunc)
    u2 = SparseSeries.variable(ring, uvars, "x_2", truncation=trunc)
    c = SparseSeries.variable(ring, uvars, "c", truncation=trunc)
    B = F.apply(u1, c) * F.apply(u2, c)

    dvars = cc2_table(c_order, c2_order)
    ic = uvars.index("c")
    b_sym = SparseSeries(ring, dvars, None, trunc)
    for ce, part in B.coefficients_of("c").items():
        g = express_in_elementary(part)
        acc = {}
        for (e1, e2), sc in g.terms.items():
            acc[(ce, e1, e2)] = sc
        b_sym = b_sym + SparseSeries(ring, dvars, acc, trunc)
    rel = b_sym - SparseSeries.variable(ring, dvars, "c2", truncation=trunc)

    two_c = _bp_two_series(F, c_order).with_vars(dvars, rename={"z": "c"})
    spec = QuotientSpec([(P_SERIES, "c", two_c, 2)])
    w = reduce_series(rel, spec)

    by_c1 = w.coefficients_of("c1")
    v = by_c1.get(1)
    if v is None:
        raise SolverError("no c*c_1 term in the rewritten relation")
    v = v.divide_by_var("c")
    if v.constant_scalar() != ring.one():
        raise SolverError("coefficient of c*c_1 is not a unit")
    vinv = v.inverse()
    d = {}
    for n, part in by_c1.items():
        if n == 1:
            continue
        dn = reduce_series(-vinv * part.divide_by_var("c"), spec)
        if not dn.is_zero():
            d[n] = dn
    d0 = d.get(0)
    if d0 is not None and not d0.evaluate_var_zero("c").is_zero():
        raise SolverError("d_0(0, c_2) != 0; the 2c-rewrite failed")
    context = {"F": F, "spec": spec, "two_c": two_c, "vars": dvars,
               "ring": ring}
    _bp_cache[key] = (d, context)
    return d, context


def bp_delta_p2(c2_order=4, z_order=8, N=3):
    """Solve delta = d_0 + sum_{i>=2} d_i delta^i by fixed-point iteration;
    returns a DeltaTable whose (1, j) entries are the delta_j (series in c
    mod [2](c)), j >= 0.

    The base case delta_0 = delta|_{c_2=0} is the class of the formal
    inverse [-1](c), whose leading term is -c; in normal form mod [2](c)
    it reads +c, since F(c, c) = [2](c) = 0 makes c self-inverse.  This
    is verified, not assumed, through F(delta_0, c) * c = 0, which is the
    defining relation F(u_1, c) F(u_2, c) = c_2 at c_2 = 0."""
    # the division by c inside the d-series costs one trustworthy c-power,
    # so compute with cap z_order and keep exponents below it
    d, ctx = bp_d_series_p2(c_order=z_order, c2_order=c2_order, N=N)
    ring, dvars, spec = ctx["ring"], ctx["vars"], ctx["spec"]
    F = ctx["F"]
    trunc = next(iter(d.values())).truncation if d else None
    c = SparseSeries.variable(ring, dvars, "c", truncation=trunc)

    def step(delta):
        out = d.get(0, SparseSeries(ring, dvars, None, trunc))
        dpow = delta * delta
        for i in range(2, max(d) + 1 if d else 2):
            di = d.get(i)
            if di is not None:
                out = out + di * dpow
            dpow = dpow * delta
        return reduce_series(out, spec)

    delta = SparseSeries(ring, dvars, None, trunc)
    for _ in range(8 * (c2_order + z_order)):
        new = step(delta)
        if new == delta:
            break
        delta = new
    else:
        raise SolverError("delta iteration failed to stabilize")

    delta0 = delta.evaluate_var_zero("c2")
    base_residual = reduce_series(F.apply(delta0, c) * c, spec)
    if not base_residual.is_zero():
        raise SolverError("delta base case fails F(delta_0, c) c = 0")

    entries = {}
    ic = dvars.index("c")
    for j, part in delta.coefficients_of("c2").items():
        part = reduce_series(part, spec)
        kept = {exps: sc for exps, sc in part.terms.items()
                if exps[ic] < z_order}
        entries[(1, j)] = part.spawn(kept)
    return DeltaTable("BP", 2, entries, c2_order)


def bp_transfer_x(c2_order=4, z_order=8, N=3):
    """Tr*(x) = c_1 - c + sum_{j>=1} delta_j c_2^j in the pi-cover basis."""
    table = bp_delta_p2(c2_order, z_order, N)
    ring = table.entry(1, 0).ring
    cvars = cover_table(2)
    out = SparseSeries.variable(ring, cvars, "c1")
    for (k, j), part in table.entries.items():
        for exps, sc in part.terms.items():
            ec = exps[part.vars.index("c")]
            new = [0] * len(cvars)
            new[cvars.index("c")] = ec
            new[cvars.index("c2")] = j
            out = out + SparseSeries(ring, cvars, {tuple(new): sc})
    return TransferExpression("pi-cover", out)


# ---------------------------------------------------------------------
# Theory adapters and norm-based transfers
# ---------------------------------------------------------------------

class TransferTheory:
    """What transfer_of_norm_symmetric needs to know about a theory:
    the prime, the cover generators, Tr*(1), Tr*(omega_k), and how to
    land rational coefficients in the theory's coefficient ring."""

    def __init__(self, p, ring, tr_one, tr_omega, from_rational, label):
        self.p = p
        self.ring = ring
        self.vars = cover_table(p)
        self.tr_one = tr_one
        self._tr_omega = tr_omega
        self.from_rational = from_rational
        self.label = label

    def tr_omega(self, k):
        return self._tr_omega(k)


def morava_theory(p, s, x_order=None):
    ring = make_ring(MORAVA_K, p, s=s)
    cvars = cover_table(p)
    ic = cvars.index("c")
    exps = [0] * len(cvars)
    exps[ic] = p ** s - 1
    tr_one = SparseSeries(ring, cvars,
                          {tuple(exps): ring.gen("v_%d" % s)})

    def omega_fn(k):
        return morava_transfer_omega(p, s, k, x_order).series

    def from_rational(c):
        if c.denominator % p == 0:
            raise SolverError("coefficient %s not %d-integral" % (c, p))
        return ring.from_number(
            (c.numerator * pow(c.denominator, -1, p)) % p)

    return TransferTheory(p, ring, tr_one, omega_fn, from_rational,
                          "K(%d) at p=%d" % (s, p))


def bp2_theory(c2_order=4, z_order=8, N=3):
    d, ctx = bp_d_series_p2(c_order=z_order - 1, c2_order=c2_order, N=N)
    ring = ctx["ring"]
    F = ctx["F"]
    cvars = cover_table(2)
    two = _bp_two_series(F, z_order - 1)
    tr_one_c = two.divide_by_var("z")
    acc = {}
    ic = cvars.index("c")
    for (ez,), sc in tr_one_c.terms.items():
        exps = [0] * len(cvars)
        exps[ic] = ez
        acc[tuple(exps)] = sc
    tr_one = SparseSeries(ring, cvars, acc)
    tr_x = bp_transfer_x(c2_order, z_order, N).series

    def omega_fn(k):
        if k != 1:
            raise SolverError("p=2 has only omega_1")
        return tr_x

    def from_rational(c):
        if c.denominator % 2 == 0:
            raise SolverError("coefficient %s not 2-local" % (c,))
        return ring.from_number(c)

    return TransferTheory(2, ring, tr_one, omega_fn, from_rational,
                          "BP at p=2")


def _svars_to_cover(series, theory):
    """Map a plain-rational series in s1..sp into the cover generators
    c_1..c_p over the theory's ring."""
    cvars = theory.vars
    acc = {}
    svars = series.vars
    for exps, sc in series.terms.items():
        new = [0] * len(cvars)
        for name, e in zip(svars.names, exps):
            if e:
                new[cvars.index("c" + name[1:])] = e
        coeff = theory.ring.zero()
        for gexps, c in sc.terms.items():
            if any(gexps):
                raise SolverError("expected pure rational coefficients")
            coeff = coeff + theory.from_rational(c)
        key = tuple(new)
        if not coeff.is_zero():
            acc[key] = acc.get(key, theory.ring.zero()) + coeff
    return SparseSeries(theory.ring, cvars, acc)


def transfer_of_norm_symmetric(a, theory):
    """Tr*(a) for a polynomial a in x_1..x_p whose cyclic norm is
    symmetric: decompose N(a) = sum_j sigma_j a_j + h(sigma_p), then
    Tr*(a) = sum_j Tr*(omega_j) a_j(c_1..c_p) + sum_m (h_m/p) Tr*(1) c_p^m
    by Frobenius reciprocity on the pure sigma_p channel."""
    factors, sp_channel = decompose_norm_symmetric(a)
    p = theory.p
    cvars = theory.vars
    out = SparseSeries(theory.ring, cvars, None)
    for j, aj in enumerate(factors, start=1):
        if aj.is_zero():
            continue
        out = out + theory.tr_omega(j) * _svars_to_cover(aj, theory)
    if not sp_channel.is_zero():
        isp = sp_channel.vars.index("s%d" % p)
        icp = cvars.index("c%d" % p)
        for exps, sc in sp_channel.terms.items():
            m = exps[isp]
            coeff = theory.ring.zero()
            for gexps, c in sc.terms.items():
                if any(gexps):
                    raise SolverError("expected pure rational coefficients")
                coeff = coeff + theory.from_rational(c / p)
            mono = [0] * len(cvars)
            mono[icp] = m
            out = out + (theory.tr_one
                         * SparseSeries(theory.ring, cvars,
                                        {tuple(mono): coeff}))
    return TransferExpression("pi-cover", out)


def transfer_x_power(k, theory):
    """Remark-style recurrence for p = 2:
    Tr*(x^k) = Tr*(x^{k-1}) c_1 - Tr*(x^{k-2}) c_2, seeded by Tr*(1) and
    Tr*(x)."""
    if theory.p != 2:
        raise SolverError("the x-power recurrence is a p=2 tool")
    if k < 1:
        raise SolverError("k must be >= 1")
    cvars = theory.vars
    ring = theory.ring
    c1 = SparseSeries.variable(ring, cvars, "c1")
    c2 = SparseSeries.variable(ring, cvars, "c2")
    prev, cur = theory.tr_one, theory.tr_omega(1)
    for _ in range(k - 1):
        prev, cur = cur, cur * c1 - prev * c2
    return TransferExpression("pi-cover", cur)

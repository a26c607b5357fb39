"""Sparse truncated multivariate power series over a graded coefficient
ring, with quotient-ideal rewriting, substitution, reversion and division.

Terms are stored as a map from exponent vectors to ring scalars.  Every
series carries its variable table (names, topological degrees, optional
per-variable exponent caps) and an optional total-degree truncation bound.
Operations silently drop terms beyond the bound or a cap; this is the
truncation discipline, not data loss.
"""

from __future__ import annotations

from fractions import Fraction

from .coefficients import Scalar, RingError


class SeriesError(ValueError):
    pass


class VariableTable:
    """Ordered list of (name, topological degree, cap)."""

    def __init__(self, entries):
        names = []
        degrees = []
        caps = []
        for entry in entries:
            if len(entry) == 2:
                name, deg = entry
                cap = None
            else:
                name, deg, cap = entry
            if deg <= 0 or deg % 2 != 0:
                raise SeriesError("variable %s needs positive even degree" % name)
            names.append(name)
            degrees.append(deg)
            caps.append(cap)
        if len(set(names)) != len(names):
            raise SeriesError("duplicate variable names")
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self.caps = tuple(caps)
        self._index = {n: i for i, n in enumerate(self.names)}

    def __eq__(self, other):
        return (isinstance(other, VariableTable)
                and self.names == other.names
                and self.degrees == other.degrees
                and self.caps == other.caps)

    def __hash__(self):
        return hash((self.names, self.degrees, self.caps))

    def __len__(self):
        return len(self.names)

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise SeriesError("no variable named %r" % (name,))

    def weight(self, exps):
        return sum(e * d for e, d in zip(exps, self.degrees))

    def within_caps(self, exps):
        for e, cap in zip(exps, self.caps):
            if cap is not None and e > cap:
                return False
        return True


class SparseSeries:
    """Truncated polynomial/power-series value.

    terms: exponent tuple -> Scalar.  truncation: bound on the variable
    part of the topological degree (sum of exponent * variable degree),
    or None for no bound.
    """

    __slots__ = ("ring", "vars", "terms", "truncation")

    def __init__(self, ring, vars, terms=None, truncation=None):
        self.ring = ring
        self.vars = vars
        self.truncation = truncation
        clean = {}
        if terms:
            for exps, sc in terms.items():
                if sc.is_zero():
                    continue
                if not self._keep(exps):
                    continue
                clean[exps] = sc
        self.terms = clean

    # -- construction helpers -----------------------------------------

    def _keep(self, exps):
        if self.truncation is not None and self.vars.weight(exps) > self.truncation:
            return False
        return self.vars.within_caps(exps)

    def _zero_exps(self):
        return (0,) * len(self.vars)

    def spawn(self, terms):
        return SparseSeries(self.ring, self.vars, terms, self.truncation)

    @staticmethod
    def constant(ring, vars, scalar, truncation=None):
        if not isinstance(scalar, Scalar):
            scalar = ring.from_number(scalar)
        zero = (0,) * len(vars)
        return SparseSeries(ring, vars, {zero: scalar}, truncation)

    @staticmethod
    def variable(ring, vars, name, exp=1, coeff=None, truncation=None):
        exps = [0] * len(vars)
        exps[vars.index(name)] = exp
        sc = coeff if isinstance(coeff, Scalar) else \
            ring.from_number(1 if coeff is None else coeff)
        return SparseSeries(ring, vars, {tuple(exps): sc}, truncation)

    def with_truncation(self, truncation):
        return SparseSeries(self.ring, self.vars, self.terms, truncation)

    def with_vars(self, vars, rename=None):
        """Re-house the series in another variable table.  Variables are
        matched by name, except where `rename` maps old names to new."""
        rename = rename or {}
        mapping = []
        for name in self.vars.names:
            mapping.append(vars.index(rename.get(name, name)))
        terms = {}
        for exps, sc in self.terms.items():
            new = [0] * len(vars)
            for old_i, new_i in enumerate(mapping):
                new[new_i] += exps[old_i]
            key = tuple(new)
            if key in terms:
                terms[key] = terms[key] + sc
            else:
                terms[key] = sc
        return SparseSeries(self.ring, vars, terms, self.truncation)

    # -- predicates ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def min_weight(self):
        """Smallest variable-part topological degree among the terms."""
        if not self.terms:
            return None
        return min(self.vars.weight(e) for e in self.terms)

    def constant_scalar(self):
        return self.terms.get(self._zero_exps(), self.ring.zero())

    def is_homogeneous(self, degree=None):
        """True iff every term has the same total topological degree
        (scalar degree plus variable weight); optionally a specific one."""
        seen = set()
        for exps, sc in self.terms.items():
            d = sc.degree()
            if d is None:
                return False
            seen.add(d + self.vars.weight(exps))
        if not seen:
            return True
        if len(seen) > 1:
            return False
        return degree is None or seen.pop() == degree

    def scalars(self):
        return self.terms.values()

    # -- arithmetic ---------------------------------------------------

    def _combine_trunc(self, other):
        if self.truncation is None:
            return other.truncation
        if other.truncation is None:
            return self.truncation
        return min(self.truncation, other.truncation)

    def _coerce(self, other):
        if isinstance(other, SparseSeries):
            return other
        if isinstance(other, Scalar):
            return SparseSeries.constant(self.ring, self.vars, other,
                                         self.truncation)
        return SparseSeries.constant(self.ring, self.vars,
                                     self.ring.from_number(other),
                                     self.truncation)

    def _check_compatible(self, other):
        if self.ring != other.ring:
            raise SeriesError("coefficient ring mismatch")
        if self.vars != other.vars:
            raise SeriesError("variable table mismatch")

    def __add__(self, other):
        other = self._coerce(other)
        self._check_compatible(other)
        acc = dict(self.terms)
        for exps, sc in other.terms.items():
            cur = acc.get(exps)
            if cur is None:
                acc[exps] = sc
            else:
                cur = cur + sc
                if cur.is_zero():
                    del acc[exps]
                else:
                    acc[exps] = cur
        return SparseSeries(self.ring, self.vars, acc,
                            self._combine_trunc(other))

    __radd__ = __add__

    def __neg__(self):
        return self.spawn({e: -sc for e, sc in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        self._check_compatible(other)
        trunc = self._combine_trunc(other)
        out = SparseSeries(self.ring, self.vars, None, trunc)
        acc = {}
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        for e1, s1 in a.items():
            for e2, s2 in b.items():
                exps = tuple(x + y for x, y in zip(e1, e2))
                if not out._keep(exps):
                    continue
                sc = s1 * s2
                if sc.is_zero():
                    continue
                cur = acc.get(exps)
                if cur is None:
                    acc[exps] = sc
                else:
                    cur = cur + sc
                    if cur.is_zero():
                        del acc[exps]
                    else:
                        acc[exps] = cur
        out.terms = acc
        return out

    __rmul__ = __mul__

    def scalar_mul(self, scalar):
        if not isinstance(scalar, Scalar):
            scalar = self.ring.from_number(scalar)
        acc = {}
        for exps, sc in self.terms.items():
            prod = sc * scalar
            if not prod.is_zero():
                acc[exps] = prod
        return self.spawn(acc)

    def __pow__(self, n):
        if n < 0:
            raise SeriesError("negative series powers are not defined")
        result = SparseSeries.constant(self.ring, self.vars,
                                       self.ring.one(), self.truncation)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = self._coerce(other)
        return (isinstance(other, SparseSeries)
                and self.ring == other.ring and self.vars == other.vars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, self.vars, frozenset(self.terms.items())))

    def __repr__(self):
        from .render import series_text
        return series_text(self)

    # -- structural operations ----------------------------------------

    def map_scalars(self, fn, ring=None):
        """Apply fn to every scalar; optionally land in another ring."""
        ring = ring or self.ring
        acc = {}
        for exps, sc in self.terms.items():
            sc2 = fn(sc)
            if not sc2.is_zero():
                acc[exps] = sc2
        return SparseSeries(ring, self.vars, acc, self.truncation)

    def coefficients_of(self, name):
        """Split off one variable: exponent -> series in the remaining
        terms (same variable table, that variable set to zero power)."""
        i = self.vars.index(name)
        buckets = {}
        for exps, sc in self.terms.items():
            e = exps[i]
            rest = exps[:i] + (0,) + exps[i + 1:]
            bucket = buckets.setdefault(e, {})
            bucket[rest] = bucket.get(rest, self.ring.zero()) + sc
        return {e: self.spawn(bucket) for e, bucket in buckets.items()}

    def evaluate_var_zero(self, name):
        i = self.vars.index(name)
        acc = {e: sc for e, sc in self.terms.items() if e[i] == 0}
        return self.spawn(acc)

    def divide_by_var(self, name, k=1):
        i = self.vars.index(name)
        acc = {}
        for exps, sc in self.terms.items():
            if exps[i] < k:
                raise SeriesError("series is not divisible by %s^%d" % (name, k))
            acc[exps[:i] + (exps[i] - k,) + exps[i + 1:]] = sc
        return self.spawn(acc)

    def substitute(self, assignment, vars=None, scalar_map=None):
        """Compose: replace variables by series.

        assignment maps variable names to SparseSeries living in the
        target table.  Unassigned variables must exist there under the
        same name.  A substituted series must have no constant term
        unless it replaces a variable that only appears to bounded
        powers anyway (we enforce the stronger condition for safety).
        `scalar_map` converts this series' scalars into the target ring
        when the rings differ.
        """
        target = None
        for repl in assignment.values():
            target = repl
            break
        if target is not None:
            tvars, tring, ttrunc = target.vars, target.ring, target.truncation
            for repl in assignment.values():
                if repl.vars != tvars or repl.ring != tring:
                    raise SeriesError("assignment series disagree on context")
        else:
            tvars, tring, ttrunc = vars or self.vars, self.ring, self.truncation
        if vars is not None:
            tvars = vars
        for name, repl in assignment.items():
            if not repl.constant_scalar().is_zero():
                raise SeriesError(
                    "cannot substitute a series with constant term for %s" % name)
        one = SparseSeries.constant(tring, tvars, tring.one(), ttrunc)
        pow_cache = {}

        def powered(name, repl, e):
            key = (name, e)
            got = pow_cache.get(key)
            if got is None:
                got = repl ** e
                pow_cache[key] = got
            return got

        result = SparseSeries(tring, tvars, None, ttrunc)
        for exps, sc in sorted(self.terms.items(),
                               key=lambda kv: self.vars.weight(kv[0])):
            if scalar_map is not None:
                sc = scalar_map(sc)
            if sc.is_zero():
                continue
            term = one.scalar_mul(sc)
            for name, e in zip(self.vars.names, exps):
                if not e:
                    continue
                repl = assignment.get(name)
                if repl is None:
                    term = term * SparseSeries.variable(tring, tvars, name, e,
                                                        truncation=ttrunc)
                else:
                    term = term * powered(name, repl, e)
                if term.is_zero():
                    break
            result = result + term
        return result

    def inverse(self):
        """1/f for f with invertible constant scalar (geometric series)."""
        u = self.constant_scalar()
        if u.is_zero():
            raise SeriesError("series with zero constant term has no inverse")
        uinv = u.inverse()
        w = self.scalar_mul(uinv) - 1
        if w.is_zero():
            return SparseSeries.constant(self.ring, self.vars, uinv,
                                         self.truncation)
        mindeg = w.min_weight()
        if mindeg is None or mindeg <= 0:
            raise SeriesError("non-constant part must have positive degree")
        bound = self.truncation
        if bound is None:
            bound = _cap_weight_bound(self.vars)
            if bound is None:
                raise SeriesError("inverse needs a truncation bound")
        out = SparseSeries.constant(self.ring, self.vars, self.ring.one(),
                                    self.truncation)
        power = out
        for _ in range(bound // mindeg):
            power = power * (-w)
            if power.is_zero():
                break
            out = out + power
        return out.scalar_mul(uinv)

    def sorted_terms(self):
        """Canonical graded ordering used for serialization."""
        return sorted(self.terms.items(),
                      key=lambda kv: (self.vars.weight(kv[0]), kv[0]))


def _cap_weight_bound(vars):
    total = 0
    for deg, cap in zip(vars.degrees, vars.caps):
        if cap is None:
            return None
        total += deg * cap
    return total


def reversion(f, name):
    """Compositional inverse of a univariate-in-`name` series f = x + O(x^2):
    returns g with f(g) = g(f) = x up to the truncation."""
    ring, vars = f.ring, f.vars
    i = vars.index(name)
    x = SparseSeries.variable(ring, vars, name, truncation=f.truncation)
    lead = f.terms.get(x._zero_exps()[:i] + (1,) + x._zero_exps()[i + 1:])
    if lead is None or lead != ring.one():
        raise SeriesError("reversion needs leading coefficient 1 at %s" % name)
    for exps in f.terms:
        if any(e and j != i for j, e in enumerate(exps)):
            raise SeriesError("reversion input must be univariate in %s" % name)
    h = f - x
    if h.is_zero():
        return x
    g = x
    bound = f.truncation
    if bound is None:
        bound = _cap_weight_bound(vars)
    if bound is None:
        raise SeriesError("reversion needs a truncation bound")
    # g <- x - h(g) gains accuracy at least one order of h's excess degree
    # per pass, so the loop count is generously bounded by the truncation.
    for _ in range(bound + 1):
        g_next = x - h.substitute({name: g})
        if g_next == g:
            return g
        g = g_next
    raise SeriesError("reversion failed to stabilize (truncation too small?)")


# -- quotient rewriting -----------------------------------------------

NILPOTENT = "nilpotent"
P_SERIES = "p-series"


class QuotientSpec:
    """Rewrite rules defining a quotient of the series ring.

    Two rule shapes:
      (NILPOTENT, name, e)           variable^e -> 0
      (P_SERIES, name, relation, q)  relation = q*name + tail with tail of
                                     variable-degree >= 2; rewrites
                                     q*name -> -tail wherever an integer
                                     coefficient is divisible by q.
    Every rewrite strictly raises the degree of the rewritten portion, so
    reduction terminates under any truncation or cap.
    """

    def __init__(self, rules):
        checked = []
        for rule in rules:
            if rule[0] == NILPOTENT:
                _, name, e = rule
                if e < 1:
                    raise SeriesError("nilpotence exponent must be >= 1")
            elif rule[0] == P_SERIES:
                _, name, relation, q = rule
                if relation.ring.modular:
                    raise SeriesError("p-series rule needs rational scalars")
                i = relation.vars.index(name)
                lead = None
                for exps, sc in relation.terms.items():
                    if exps[i] == 1 and not any(
                            e for j, e in enumerate(exps) if j != i and e):
                        lead = sc
                    elif exps[i] < 2:
                        raise SeriesError("relation tail must be O(%s^2)" % name)
                if lead is None or lead != relation.ring.from_number(q):
                    raise SeriesError("relation must lead with %d*%s" % (q, name))
            else:
                raise SeriesError("unknown rule kind %r" % (rule[0],))
            checked.append(rule)
        self.rules = tuple(checked)


def _split_mod_q(scalar, q):
    """Split a rational-scalar as r + q*g with every coefficient of r in
    0..q-1 (computed q-locally: denominators stay coprime to q)."""
    ring = scalar.ring
    r = ring.zero()
    g = ring.zero()
    for exps, c in scalar.terms.items():
        num, den = c.numerator, c.denominator
        if den % q == 0:
            raise SeriesError("coefficient %s is not %d-local" % (c, q))
        t = (num * pow(den, -1, q)) % q
        rest = (c - t) / q
        if t:
            r = r + Scalar(ring, {exps: Fraction(t)})
        if rest:
            g = g + Scalar(ring, {exps: rest})
    return r, g


def reduce_series(f, spec):
    """Normal form of f under the quotient rules; idempotent."""
    work = f
    for rule in spec.rules:
        if rule[0] == NILPOTENT:
            _, name, e = rule
            i = work.vars.index(name)
            acc = {ex: sc for ex, sc in work.terms.items() if ex[i] < e}
            work = work.spawn(acc)
    pseries_rules = [r for r in spec.rules if r[0] == P_SERIES]
    if not pseries_rules:
        return work
    nil_rules = [r for r in spec.rules if r[0] == NILPOTENT]
    changed = True
    while changed:
        changed = False
        for _, name, relation, q in pseries_rules:
            i = work.vars.index(name)
            tail = relation - SparseSeries.variable(
                relation.ring, relation.vars, name, coeff=q,
                truncation=relation.truncation)
            tail = tail.with_vars(work.vars).with_truncation(work.truncation)
            pending = work.spawn({})
            kept = {}
            for exps, sc in work.terms.items():
                if exps[i] == 0:
                    kept[exps] = sc
                    continue
                r, g = _split_mod_q(sc, q)
                if not r.is_zero():
                    kept[exps] = r
                if g.is_zero():
                    continue
                changed = True
                lower = exps[:i] + (exps[i] - 1,) + exps[i + 1:]
                shifted = {}
                for texps, tsc in tail.terms.items():
                    key = tuple(a + b for a, b in zip(texps, lower))
                    shifted[key] = tsc * g
                pending = pending + work.spawn(shifted).scalar_mul(-1)
            work = work.spawn(kept) + pending
            for nrule in nil_rules:
                _, nname, ne = nrule
                j = work.vars.index(nname)
                work = work.spawn(
                    {ex: sc for ex, sc in work.terms.items() if ex[j] < ne})
    return work

"""Graded coefficient rings: p-local rationals with polynomial generators
(m_n / v_n) and the mod-p Laurent ring F_p[v_s, v_s^-1].

Ring elements (`Scalar`) are finite sums of graded monomials in the ring
generators.  BP-flavored rings carry exact `Fraction` coefficients; Morava
rings carry residues mod p with a (possibly negative) v_s exponent.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

BP_RATIONAL = "bp-rational"
BP_INTEGER = "bp-integer"
MORAVA_K = "morava-k"


class RingError(ValueError):
    pass


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class CoefficientRing:
    """Descriptor of a graded coefficient ring.

    kind        one of BP_RATIONAL, BP_INTEGER, MORAVA_K
    p           the prime
    s           chromatic height (Morava only)
    num_generators
                N, the number of m_n / v_n pairs (BP kinds only)
    gens        ordered generator names
    degrees     topological degree of each generator (negative even)
    """

    def __init__(self, kind, p, *, s=None, num_generators=None,
                 gens=None, degrees=None):
        if not is_prime(p):
            raise RingError("p must be prime, got %r" % (p,))
        self.kind = kind
        self.p = p
        self.s = s
        self.num_generators = num_generators
        if gens is not None:
            self.gens = tuple(gens)
            self.degrees = dict(degrees)
        elif kind == MORAVA_K:
            if s is None or s < 1:
                raise RingError("Morava ring needs height s >= 1")
            self.gens = ("v_%d" % s,)
            self.degrees = {self.gens[0]: -2 * (p ** s - 1)}
        elif kind in (BP_RATIONAL, BP_INTEGER):
            if num_generators is None or num_generators < 1:
                raise RingError("BP ring needs num_generators >= 1")
            names = []
            degrees = {}
            for prefix in ("m", "v"):
                for n in range(1, num_generators + 1):
                    name = "%s_%d" % (prefix, n)
                    names.append(name)
                    degrees[name] = -2 * (p ** n - 1)
            self.gens = tuple(names)
            self.degrees = degrees
        else:
            raise RingError("unknown ring kind %r" % (kind,))
        for name, deg in self.degrees.items():
            if deg >= 0 or deg % 2 != 0:
                raise RingError("generator %s has invalid degree %d" % (name, deg))
        self._index = {name: i for i, name in enumerate(self.gens)}
        self._zero_exp = (0,) * len(self.gens)

    def __eq__(self, other):
        return (isinstance(other, CoefficientRing)
                and self.kind == other.kind and self.p == other.p
                and self.s == other.s and self.gens == other.gens
                and self.degrees == other.degrees)

    def __hash__(self):
        return hash((self.kind, self.p, self.s, self.gens))

    def __repr__(self):
        if self.kind == MORAVA_K:
            return "CoefficientRing(K(%d) at p=%d)" % (self.s, self.p)
        return "CoefficientRing(%s, p=%d, N=%s)" % (self.kind, self.p,
                                                    self.num_generators)

    @property
    def modular(self):
        return self.kind == MORAVA_K

    def gen_index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise RingError("ring has no generator %r" % (name,))

    def monomial_degree(self, exps):
        return sum(e * self.degrees[g] for g, e in zip(self.gens, exps))

    def normalize_coeff(self, c):
        if self.modular:
            return int(c) % self.p
        if not isinstance(c, Fraction):
            c = Fraction(c)
        return c

    def zero(self):
        return Scalar(self, {})

    def one(self):
        return self.from_number(1)

    def from_number(self, c):
        c = self.normalize_coeff(c)
        if not c:
            return Scalar(self, {})
        return Scalar(self, {self._zero_exp: c})

    def gen(self, name, exp=1, coeff=1):
        i = self.gen_index(name)
        if exp < 0 and self.kind != MORAVA_K:
            raise RingError("negative generator exponents only in Morava rings")
        coeff = self.normalize_coeff(coeff)
        if not coeff:
            return self.zero()
        exps = [0] * len(self.gens)
        exps[i] = exp
        return Scalar(self, {tuple(exps): coeff})


def make_ring(kind, p, *, s=None, N=None):
    """Spec-facing ring factory.  `s` for Morava K(s), `N` for BP kinds."""
    if kind == MORAVA_K:
        if s is None or s < 1:
            raise RingError("height s must be >= 1")
        return CoefficientRing(MORAVA_K, p, s=s)
    if kind in (BP_RATIONAL, BP_INTEGER):
        if N is None or N < 1:
            raise RingError("N must be >= 1")
        return CoefficientRing(kind, p, num_generators=N)
    raise RingError("unknown ring kind %r" % (kind,))


def rational_ring(p, gens, degrees):
    """A p-local rational polynomial ring with custom generators.

    Used as the construction stage of the Morava formal group law, where
    exact denominators must be tracked before reduction mod p.
    """
    return CoefficientRing(BP_RATIONAL, p, gens=tuple(gens), degrees=degrees)


class Scalar:
    """A ring element: finite sum of (coefficient, generator-monomial) terms.

    Immutable once built.  Zero is the empty term map.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- constructors -------------------------------------------------

    @staticmethod
    def _merge(ring, acc, exps, coeff):
        cur = acc.get(exps)
        if cur is None:
            if coeff:
                acc[exps] = coeff
        else:
            cur = cur + coeff
            if ring.modular:
                cur %= ring.p
            if cur:
                acc[exps] = cur
            else:
                del acc[exps]

    # -- predicates ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_number(self):
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def as_number(self):
        if not self.terms:
            return 0 if self.ring.modular else Fraction(0)
        if not self.is_number():
            raise RingError("scalar is not a pure number: %r" % (self,))
        return next(iter(self.terms.values()))

    def degree(self):
        """The common topological degree of all terms, or None if mixed.

        For Morava rings a pure residue (no v_s power) has degree 0.
        """
        degs = {self.ring.monomial_degree(exps) for exps in self.terms}
        if not degs:
            return 0
        if len(degs) > 1:
            return None
        return degs.pop()

    def uses_generator(self, prefix):
        for exps in self.terms:
            for g, e in zip(self.ring.gens, exps):
                if e and g.startswith(prefix):
                    return True
        return False

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if self.ring != other.ring:
            raise RingError("ring mismatch in scalar addition")
        acc = dict(self.terms)
        for exps, c in other.terms.items():
            self._merge(self.ring, acc, exps, c)
        return Scalar(self.ring, acc)

    def __neg__(self):
        if self.ring.modular:
            p = self.ring.p
            return Scalar(self.ring, {e: (-c) % p for e, c in self.terms.items()})
        return Scalar(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        if self.ring != other.ring:
            raise RingError("ring mismatch in scalar product")
        ring = self.ring
        acc = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                c = c1 * c2
                if ring.modular:
                    c %= ring.p
                if c:
                    exps = tuple(a + b for a, b in zip(e1, e2))
                    self._merge(ring, acc, exps, c)
        return Scalar(ring, acc)

    __rmul__ = __mul__
    __radd__ = __add__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        """Inverse of an invertible monomial scalar (unit coefficient,
        negative exponents allowed only in Morava rings)."""
        if len(self.terms) != 1:
            raise RingError("only monomial scalars are invertible")
        exps, c = next(iter(self.terms.items()))
        ring = self.ring
        if ring.modular:
            cinv = pow(c, -1, ring.p)
            return Scalar(ring, {tuple(-e for e in exps): cinv})
        if any(exps):
            raise RingError("non-constant BP scalars are not invertible")
        return ring.from_number(Fraction(1) / c)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            return other
        return self.ring.from_number(other)

    # -- structure ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.from_number(other)
        return (isinstance(other, Scalar) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        from .render import scalar_text
        return scalar_text(self)

    def map_coefficients(self, fn, ring=None):
        ring = ring or self.ring
        acc = {}
        for exps, c in self.terms.items():
            c2 = fn(c)
            if ring.modular:
                c2 = int(c2) % ring.p
            if c2:
                self._merge(ring, acc, exps, c2)
        return Scalar(ring, acc)

    def substitute_gens(self, assignment, target_ring=None):
        """Replace generators by scalars.  `assignment` maps generator
        names to Scalars in the target ring; unassigned generators must
        exist in the target ring."""
        target = target_ring
        if target is None:
            some = next(iter(assignment.values()), None)
            target = some.ring if some is not None else self.ring
        result = target.zero()
        pow_cache = {}
        for exps, c in self.terms.items():
            term = target.from_number(c) if not target.modular else \
                target.from_number(c if isinstance(c, int) else c)
            for g, e in zip(self.ring.gens, exps):
                if not e:
                    continue
                if g in assignment:
                    key = (g, e)
                    val = pow_cache.get(key)
                    if val is None:
                        val = assignment[g] ** e
                        pow_cache[key] = val
                    term = term * val
                else:
                    term = term * target.gen(g, e)
            result = result + term
        return result


# -- Hazewinkel change of basis ---------------------------------------

@lru_cache(maxsize=None)
def _v_from_m(ring, n):
    p = ring.p
    result = ring.gen("m_%d" % n, coeff=p)
    for i in range(1, n):
        vi = _v_from_m(ring, n - i)
        result = result - ring.gen("m_%d" % i) * (vi ** (p ** i))
    return result


@lru_cache(maxsize=None)
def _m_from_v(ring, n):
    p = ring.p
    acc = ring.gen("v_%d" % n)
    for i in range(1, n):
        mi = _m_from_v(ring, i)
        acc = acc + mi * (ring.gen("v_%d" % (n - i)) ** (p ** i))
    return acc.map_coefficients(lambda c: c / p)


def v_from_m(n, ring):
    """v_n as a polynomial in the m-generators: p*m_n - sum m_i v_{n-i}^(p^i)."""
    _check_bp_index(ring, n)
    expr = _v_from_m(ring, n)
    assignment = {"v_%d" % i: _v_from_m(ring, i)
                  for i in range(1, ring.num_generators + 1)}
    return expr.substitute_gens(assignment, target_ring=ring)


def m_from_v(n, ring):
    """m_n as a polynomial in the v-generators (inverse of v_from_m)."""
    _check_bp_index(ring, n)
    return _m_from_v(ring, n)


def _check_bp_index(ring, n):
    if ring.kind not in (BP_RATIONAL, BP_INTEGER):
        raise RingError("m/v conversion requires a BP ring")
    if not 1 <= n <= ring.num_generators:
        raise RingError("generator index %d out of range 1..%d"
                        % (n, ring.num_generators))


def to_v_basis(scalar):
    """Rewrite a BP scalar so that no m-generator occurs."""
    ring = scalar.ring
    if ring.kind not in (BP_RATIONAL, BP_INTEGER):
        raise RingError("v-basis conversion requires a BP ring")
    if not scalar.uses_generator("m_"):
        return scalar
    assignment = {"m_%d" % n: _m_from_v(ring, n)
                  for n in range(1, ring.num_generators + 1)}
    return scalar.substitute_gens(assignment, target_ring=ring)


def to_m_basis(scalar):
    """Rewrite a BP scalar so that no v-generator occurs."""
    ring = scalar.ring
    if ring.kind not in (BP_RATIONAL, BP_INTEGER):
        raise RingError("m-basis conversion requires a BP ring")
    if not scalar.uses_generator("v_"):
        return scalar
    assignment = {"v_%d" % n: _v_from_m(ring, n)
                  for n in range(1, ring.num_generators + 1)}
    return scalar.substitute_gens(assignment, target_ring=ring)


def integrality_check(value, p):
    """True iff every rational coefficient has denominator coprime to p.

    `value` may be a Scalar or anything with a `scalars()` iterator
    (SparseSeries).  Raises if the input still involves m-generators,
    since p-local integrality is only meaningful in the v-basis.
    """
    scalars = [value] if isinstance(value, Scalar) else list(value.scalars())
    for s in scalars:
        if s.uses_generator("m_"):
            raise RingError("integrality check requires v-basis input")
        for c in s.terms.values():
            if isinstance(c, Fraction) and c.denominator % p == 0:
                return False
    return True

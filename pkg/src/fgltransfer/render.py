"""Plain-text and JSON rendering with a canonical term order.

The text form follows the conventions of the computations this engine
reproduces, e.g. "v_2*y^3*s3 + v_2*y^4*x": numeric factor first (omitted
when 1), then ring generators, then variables, joined by '*', with '^'
for exponents.
"""

from __future__ import annotations

import json
from fractions import Fraction


def _factor(name, exp):
    if exp == 1:
        return name
    return "%s^%d" % (name, exp)


def _scalar_factors(scalar):
    """Yield (numeric-string-or-None, [generator factors]) per term,
    in sorted generator-monomial order."""
    ring = scalar.ring
    for exps, c in scalar.sorted_terms():
        factors = [_factor(g, e) for g, e in zip(ring.gens, exps) if e]
        if isinstance(c, Fraction):
            if c == 1:
                num = None
            elif c == -1:
                num = "-"
            else:
                num = str(c)
        else:
            num = None if c == 1 else str(c)
        yield num, factors


def scalar_text(scalar):
    if scalar.is_zero():
        return "0"
    parts = []
    for num, factors in _scalar_factors(scalar):
        if num == "-":
            body = "*".join(factors) if factors else "1"
            parts.append("-" + body)
        elif num is None:
            parts.append("*".join(factors) if factors else "1")
        else:
            parts.append("*".join([num] + factors) if factors else num)
    return " + ".join(parts).replace("+ -", "- ")


def series_text(series):
    if series.is_zero():
        return "0"
    parts = []
    for exps, scalar in series.sorted_terms():
        var_factors = [_factor(n, e)
                       for n, e in zip(series.vars.names, exps) if e]
        scalar_parts = list(_scalar_factors(scalar))
        if len(scalar_parts) == 1:
            num, gen_factors = scalar_parts[0]
            factors = gen_factors + var_factors
            if num == "-":
                parts.append("-" + ("*".join(factors) if factors else "1"))
            elif num is None:
                parts.append("*".join(factors) if factors else "1")
            else:
                parts.append("*".join([num] + factors) if factors else num)
        else:
            coeff = scalar_text(scalar)
            body = "*".join(var_factors)
            parts.append("(%s)*%s" % (coeff, body) if body else "(%s)" % coeff)
    return " + ".join(parts).replace("+ -", "- ")


# -- canonical JSON ---------------------------------------------------

def scalar_json(scalar):
    """List of term objects: rationals as {"num","den","gens"}, residues
    as {"mod_p","v_exp"} (plus "gens" when other generators occur)."""
    ring = scalar.ring
    out = []
    for exps, c in scalar.sorted_terms():
        gens = {g: e for g, e in zip(ring.gens, exps) if e}
        if ring.modular:
            v_name = "v_%d" % ring.s if ring.s else None
            v_exp = gens.pop(v_name, 0) if v_name else 0
            entry = {"mod_p": int(c), "v_exp": v_exp}
            if gens:
                entry["gens"] = gens
        else:
            entry = {"num": str(c.numerator), "den": str(c.denominator),
                     "gens": gens}
        out.append(entry)
    return out


def series_json(series):
    terms = []
    for exps, scalar in series.sorted_terms():
        terms.append({
            "vars": {n: e for n, e in zip(series.vars.names, exps) if e},
            "coeff": scalar_json(scalar),
        })
    return terms


def dump_canonical(obj):
    """Deterministic JSON encoding: fixed separators, preserved key order."""
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)

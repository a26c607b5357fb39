"""Published reference values for small cases, used as cross-checks.

The tables below record the displayed closed forms for the transferred
Chern class computations this engine reproduces: the BP delta_1 column at
p = 2 and the sigma_k lines for (p, s) = (3, 2) and (5, 3).  They are
stored as plain term tables and compared against computed values; any
discrepancy is reported term by term together with a homogeneity audit,
since a reference term violating the grading indicates a typo in the
source table rather than an engine defect.
"""

from __future__ import annotations

from .series import SparseSeries, VariableTable
from .solver import sigma_chern_all, xz_table
from .coefficients import make_ring, MORAVA_K


# delta_1 for BP at p = 2, as tabulated, modulo z^8.  Keys are z-exponents,
# values map (e_1, e_2, e_3) exponents of (v_1, v_2, v_3) to integers.
DELTA1_TABULATED = {
    2: {(2, 0, 0): 1},
    3: {(3, 0, 0): 1, (0, 1, 0): 1},
    4: {(1, 0, 0): 1},
    6: {(6, 0, 0): 1, (3, 1, 0): 1},
    7: {(4, 1, 0): 1, (0, 2, 0): 1, (0, 0, 1): 1},
}

# sigma_k lines for Morava K-theory.  Terms are tuples
# (residue, v-exponent, y-exponent, x-exponent, sigma_p-exponent)
# with y = z^{p-1}.
SIGMA_TABULATED = {
    (3, 2): {
        1: [(1, 1, 3, 0, 1), (1, 1, 4, 1, 0)],
        2: [(2, 2, 3, 0, 4), (2, 1, 2, 0, 2), (1, 1, 4, 2, 0),
            (2, 0, 1, 0, 0)],
    },
    (5, 3): {
        1: [(1, 1, 25, 0, 5), (1, 1, 30, 0, 1), (1, 1, 31, 1, 0)],
        2: [(4, 2, 25, 0, 30), (4, 2, 30, 0, 26), (3, 1, 19, 0, 10),
            (1, 1, 24, 0, 6), (3, 1, 29, 0, 2), (2, 1, 31, 2, 0)],
        3: [(2, 3, 25, 0, 55), (2, 3, 30, 0, 51), (1, 2, 19, 0, 35),
            (2, 2, 24, 0, 31), (1, 2, 29, 0, 27), (2, 1, 13, 0, 15),
            (1, 1, 18, 0, 11), (1, 1, 23, 0, 7), (2, 1, 28, 0, 3),
            (2, 1, 31, 3, 0)],
        4: [(4, 4, 25, 0, 80), (4, 4, 30, 0, 76), (4, 3, 19, 0, 60),
            (3, 3, 24, 0, 56), (4, 3, 29, 0, 52), (4, 2, 13, 0, 40),
            (2, 2, 18, 0, 36), (2, 2, 23, 0, 32), (4, 2, 28, 0, 28),
            (4, 1, 7, 0, 20), (1, 1, 12, 0, 16), (4, 1, 17, 0, 12),
            (1, 1, 22, 0, 8), (4, 1, 27, 0, 4), (1, 1, 31, 4, 0),
            (4, 0, 1, 0, 0)],
    },
}


def sigma_reference_series(p, s, k, x_order=None):
    """Evaluate the tabulated sigma_k line as an (x, z) series by
    substituting the engine's sigma_p-expansion and y = z^{p-1}."""
    table = SIGMA_TABULATED[(p, s)][k]
    expansions = sigma_chern_all(p, s, x_order)
    sp = expansions[p]
    ring = sp.ring
    vars = sp.vars
    vname = "v_%d" % s
    needed = sorted({t[4] for t in table})
    powers = {0: SparseSeries.constant(ring, vars, ring.one(),
                                      sp.truncation)}
    for e in needed:
        if e in powers:
            continue
        base = max(i for i in powers if i <= e)
        cur = powers[base]
        for _ in range(e - base):
            cur = cur * sp
        powers[e] = cur
    out = SparseSeries(ring, vars, None, sp.truncation)
    for residue, ve, ye, xe, spe in table:
        mono = SparseSeries.variable(
            ring, vars, "z", exp=(p - 1) * ye,
            coeff=ring.gen(vname, ve, residue) if ve
            else ring.from_number(residue),
            truncation=sp.truncation)
        if xe:
            mono = mono * SparseSeries.variable(ring, vars, "x", exp=xe,
                                                truncation=sp.truncation)
        out = out + mono * powers[spe]
    return out


def sigma_reference_check(p, s, k, x_order=None):
    """True iff the engine's sigma_k expansion equals the tabulated line
    after substitution, within the working truncation window."""
    expansions = sigma_chern_all(p, s, x_order)
    return expansions[k] == sigma_reference_series(p, s, k, x_order)


def _bp_scalar_from_table(ring, entry):
    acc = ring.zero()
    for exps, c in sorted(entry.items()):
        term = ring.from_number(c)
        for n, e in enumerate(exps, start=1):
            if e:
                term = term * ring.gen("v_%d" % n, e)
        acc = acc + term
    return acc


def delta1_diff_report(table):
    """Compare the computed delta_1 column (entry (1, 1) of a p = 2
    DeltaTable, a series in c) against the tabulated z-power table.

    The tabulated display carries one extra factor of z relative to the
    c-series (its k-th c-coefficient is listed against z^{k+1}); both
    sides are audited for degree homogeneity, the computed side against
    topological degree -2."""
    computed = table.entry(1, 1)
    ring = computed.ring
    ic = computed.vars.index("c")
    z_bound = max(DELTA1_TABULATED)
    by_z = {}
    for exps, sc in computed.terms.items():
        if exps[ic] + 1 <= z_bound:
            by_z[exps[ic] + 1] = sc
    rows = []
    all_z = sorted(set(by_z) | set(DELTA1_TABULATED))
    for ze in all_z:
        got = by_z.get(ze)
        want_entry = DELTA1_TABULATED.get(ze)
        want = _bp_scalar_from_table(ring, want_entry) if want_entry else None
        if got is not None and want is not None:
            status = "match" if got == want else "mismatch"
        elif got is not None:
            status = "extra"
        else:
            status = "missing"
        row = {"z_exp": ze, "status": status}
        if got is not None:
            row["computed"] = got
            row["computed_homogeneous"] = (
                got.degree() is not None
                and got.degree() + 2 * (ze - 1) == -2)
        if want is not None:
            row["tabulated"] = want
            row["tabulated_homogeneous"] = (
                want.degree() is not None
                and want.degree() + 2 * (ze - 1) == -2)
        rows.append(row)
    agreed = [r for r in rows if r["status"] == "match"]
    disputed = [r for r in rows if r["status"] != "match"]
    clean = all(r.get("tabulated_homogeneous", True) is False
                for r in disputed if "tabulated" in r)
    return {
        "rows": rows,
        "matches": len(agreed),
        "disputes": len(disputed),
        "all_disputes_inhomogeneous_in_table": clean,
        "computed_all_homogeneous": all(
            r.get("computed_homogeneous", True) for r in rows),
    }

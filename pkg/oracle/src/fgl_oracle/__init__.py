"""Independent recomputation oracle for formal group law expansions.

This package deliberately shares no code with the engine it checks.  The
exact rational stage (p-typical logarithms, series reversion, composition)
is built on sympy's polynomial rings and ring-series reversion; the mod-p
sigma expansions use dense numpy FFT convolution.  Each job is answered
with the same canonical JSON term encoding the engine emits, so agreement
can be checked byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.rings import ring
from sympy.polys.ring_series import rs_series_reversion


def dump_canonical(obj):
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


def _to_fraction(c):
    return Fraction(int(c.numerator), int(c.denominator))


# -- Morava K(s): height-s Honda formal group law ----------------------


def morava_fgl_dict(p, s, order=None, x_cap=None, y_cap=None):
    """F(x, y) over the p-local rationals with one generator v, as a map
    (x_exp, y_exp, v_exp) -> Fraction, truncated to total degree `order`
    and the optional per-variable caps."""
    if order is None:
        if x_cap is None or y_cap is None:
            raise ValueError("need order or both caps")
        order = x_cap + y_cap
    Ru, X, T, vu = ring("X,T,v", QQ)
    log = X
    i = 1
    while p ** (i * s) <= order:
        e_i = (p ** (i * s) - 1) // (p ** s - 1)
        log += QQ(1, p ** i) * vu ** e_i * X ** (p ** (i * s))
        i += 1
    exp = rs_series_reversion(log, X, order + 1, T)

    Rb, x, y, v = ring("x,y,v", QQ)

    def keep(monom):
        ex, ey, ev = monom
        if ex + ey > order:
            return False
        if x_cap is not None and ex > x_cap:
            return False
        if y_cap is not None and ey > y_cap:
            return False
        return True

    def trunc(f):
        return Rb({m: c for m, c in f.terms() if keep(m)})

    def embed(poly, gen):
        out = Rb.zero
        for (eX, eT, ev), c in poly.terms():
            out += c * gen ** (eX + eT) * v ** ev
        return out

    u = embed(log, x) + embed(log, y)

    def tpow(base, n):
        result = Rb.one
        b = base
        while n:
            if n & 1:
                result = trunc(result * b)
            n >>= 1
            if n:
                b = trunc(b * b)
        return result

    # walk the exponents of exp in increasing order, reusing the previous
    # power of u at each step
    steps = sorted((eT, ev, c) for (eX, eT, ev), c in exp.terms())
    F = Rb.zero
    cur_k = None
    cur_pow = None
    for eT, ev, c in steps:
        if cur_k is None:
            cur_pow = tpow(u, eT)
        else:
            cur_pow = trunc(cur_pow * tpow(u, eT - cur_k))
        cur_k = eT
        F += c * v ** ev * cur_pow
    F = trunc(F)
    return {m: _to_fraction(c) for m, c in F.terms()}


def _modp_residue(c, p):
    if c.denominator % p == 0:
        raise ValueError("coefficient %s is not %d-integral" % (c, p))
    return (c.numerator * pow(c.denominator, -1, p)) % p


def morava_fgl_json(p, s, order):
    """Canonical term list for the mod-p reduction of the K(s) law."""
    F = morava_fgl_dict(p, s, order=order)
    grouped = {}
    for (ex, ey, ev), c in F.items():
        r = _modp_residue(c, p)
        if r:
            grouped.setdefault((ex, ey), []).append((ev, r))
    terms = []
    for (ex, ey) in sorted(grouped, key=lambda m: (m[0] + m[1], m)):
        coeff = [{"mod_p": r, "v_exp": ev}
                 for ev, r in sorted(grouped[(ex, ey)])]
        vars_obj = {}
        if ex:
            vars_obj["x"] = ex
        if ey:
            vars_obj["y"] = ey
        terms.append({"vars": vars_obj, "coeff": coeff})
    return terms


# -- BP at p = 2: q-series in the Hazewinkel v-basis -------------------


def bp_q_series_json(p, N, q, order):
    """[q](z) = exp(q log z) for the BP law with N generator pairs, with
    every m-generator rewritten in the v-basis."""
    mnames = ",".join("m%d" % n for n in range(1, N + 1))
    Ru = ring("Z,T," + mnames, QQ)
    R, gens = Ru[0], Ru[1:]
    Z, T = gens[0], gens[1]
    ms = gens[2:]
    log = Z
    for n in range(1, N + 1):
        if p ** n <= order:
            log += ms[n - 1] * Z ** (p ** n)
    exp = rs_series_reversion(log, Z, order + 1, T)

    def trunc(f):
        return R({m: c for m, c in f.terms() if m[0] + m[1] <= order})

    u = trunc(log * q)

    def tpow(base, n):
        result = R.one
        b = base
        while n:
            if n & 1:
                result = trunc(result * b)
            n >>= 1
            if n:
                b = trunc(b * b)
        return result

    qz = R.zero
    for monom, c in exp.terms():
        k = monom[1]
        extra = R({(0, 0) + monom[2:]: c})
        qz += trunc(extra * tpow(u, k))
    qz = trunc(qz)

    # Hazewinkel: m_n = (v_n + sum_{0<i<n} m_i v_{n-i}^{p^i}) / p
    vnames = ",".join("v%d" % n for n in range(1, N + 1))
    Rv = ring("z," + vnames, QQ)
    Sv, vgens = Rv[0], Rv[1:]
    zv = vgens[0]
    vs = vgens[1:]
    mv = {}
    for n in range(1, N + 1):
        acc = vs[n - 1]
        for i in range(1, n):
            acc += mv[i] * vs[n - i - 1] ** (p ** i)
        mv[n] = acc * QQ(1, p)

    out = Sv.zero
    for monom, c in qz.terms():
        term = c * zv ** monom[0]
        for n in range(1, N + 1):
            e = monom[1 + n]
            if e:
                term = term * mv[n] ** e
        out += term

    grouped = {}
    for monom, c in out.terms():
        ez = monom[0]
        vexps = tuple(monom[1:])
        grouped.setdefault(ez, []).append((vexps, _to_fraction(c)))
    terms = []
    for ez in sorted(grouped):
        coeff = []
        for vexps, c in sorted(grouped[ez]):
            entry = {"num": str(c.numerator), "den": str(c.denominator),
                     "gens": {"v_%d" % (i + 1): e
                              for i, e in enumerate(vexps) if e}}
            coeff.append(entry)
        terms.append({"vars": {"z": ez} if ez else {},
                      "coeff": coeff})
    return terms


# -- sigma expansions over K(s) by dense convolution -------------------


def _conv2_modp(a, b, p, x_cap, z_cap):
    f0 = a.shape[0] + b.shape[0] - 1
    f1 = a.shape[1] + b.shape[1] - 1
    fa = np.fft.rfft2(a.astype(np.float64), s=(f0, f1))
    fb = np.fft.rfft2(b.astype(np.float64), s=(f0, f1))
    raw = np.fft.irfft2(fa * fb, s=(f0, f1))
    out = np.rint(raw)
    if np.max(np.abs(raw - out)) > 0.25:
        raise ValueError("FFT convolution lost integer precision")
    out = out.astype(np.int64) % p
    return out[:x_cap + 1, :z_cap + 1]


def sigma_expansion_json(p, s, k, x_order=None):
    """sigma_k(x, F(x,z), ..., F(x,(p-1)z)) over K(s) with z^{p^s} = 0,
    as the canonical term list.  The v-power of each monomial is forced
    by homogeneity: sigma_k has topological degree 2k."""
    if x_order is None:
        x_order = p ** (s + 1)
    z_cap = p ** s - 1
    F = morava_fgl_dict(p, s, x_cap=x_order, y_cap=z_cap)
    A = np.zeros((x_order + 1, z_cap + 1), dtype=np.int64)
    for (ex, ey, ev), c in F.items():
        r = _modp_residue(c, p)
        if not r:
            continue
        if (ex + ey - 1) % (p ** s - 1) or ev != (ex + ey - 1) // (p ** s - 1):
            raise ValueError("FGL coefficient violates the grading")
        A[ex, ey] = r
    xarr = np.zeros_like(A)
    xarr[1, 0] = 1
    args = [xarr]
    for i in range(1, p):
        scale = np.array([pow(i, ez, p) for ez in range(z_cap + 1)],
                         dtype=np.int64)
        args.append((A * scale[np.newaxis, :]) % p)

    e = [None] * (p + 1)
    e[0] = np.zeros_like(A)
    e[0][0, 0] = 1
    for j in range(1, p + 1):
        e[j] = np.zeros_like(A)
    for a in args:
        for j in range(p, 0, -1):
            e[j] = (e[j] + _conv2_modp(e[j - 1], a, p, x_order, z_cap)) % p

    ek = e[k]
    terms = []
    coords = sorted(((int(a), int(b)) for a, b in zip(*np.nonzero(ek))),
                    key=lambda m: (m[0] + m[1], m))
    for (ex, ez) in coords:
        r = int(ek[ex, ez])
        if (ex + ez - k) % (p ** s - 1):
            raise ValueError("sigma term violates the grading")
        ev = (ex + ez - k) // (p ** s - 1)
        vars_obj = {}
        if ex:
            vars_obj["x"] = int(ex)
        if ez:
            vars_obj["z"] = int(ez)
        terms.append({"vars": vars_obj,
                      "coeff": [{"mod_p": r, "v_exp": ev}]})
    return terms


# -- job dispatch ------------------------------------------------------


def run_job(job):
    jid = job.get("id")
    kind = job.get("kind")
    try:
        if kind == "fgl" and job.get("theory") == "morava":
            terms = morava_fgl_json(job["p"], job["s"], job["order"])
        elif kind == "pseries" and job.get("theory") == "bp":
            terms = bp_q_series_json(job["p"], job["N"], job["q"],
                                     job["order"])
        elif kind == "sigma":
            terms = sigma_expansion_json(job["p"], job["s"], job["k"],
                                         job.get("x_order"))
        else:
            return {"id": jid, "verdict": "skipped"}
    except Exception as exc:
        return {"id": jid, "verdict": "mismatch", "error": str(exc)}
    dump = dump_canonical(terms)
    if "expected" in job:
        verdict = "match" if job["expected"] == dump else "mismatch"
    else:
        verdict = "computed"
    return {"id": jid, "verdict": verdict, "terms": dump}


def run_config(config):
    return {"results": [run_job(job) for job in config.get("jobs", [])]}

"""Command-line interface.

Every subcommand prints a deterministic artifact: canonical term order,
fixed JSON key order, no timestamps.  Exit codes: 0 success, 2 parameter
validation error, 3 internal consistency failure (residual equations,
integrality, oracle mismatch).
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

from .coefficients import RingError
from .series import SparseSeries, SeriesError
from .fgl import bp_fgl, morava_fgl, q_series, fgl_axiom_check
from .solver import (
    SolverError, sigma_chern_expansion, morava_lambda, bp_delta_p2,
    morava_transfer_omega, transfer_x_power, bp2_theory,
)
from .groups import (
    GroupError, GroupDescriptor, stable_euler, sigma_p_presentation,
    wreath_basis,
)
from .render import series_text, scalar_text, series_json, dump_canonical
from . import reference


class ValidationError(Exception):
    pass


# -- small helpers ----------------------------------------------------


def _emit(args, payload_text, payload_obj=None):
    if args.format == "json" and payload_obj is not None:
        out = dump_canonical(payload_obj)
    else:
        out = payload_text
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _require(cond, message):
    if not cond:
        raise ValidationError(message)


def _y_text(series, p):
    """Render a z-series with y = z^{p-1} where the exponent allows."""
    parts = []
    for exps, sc in series.sorted_terms():
        (ez,) = exps
        body = scalar_text(sc)
        if ez:
            if ez % (p - 1) == 0:
                ye = ez // (p - 1)
                var = "y" if ye == 1 else "y^%d" % ye
            else:
                var = "z" if ez == 1 else "z^%d" % ez
            body = var if body == "1" else body + "*" + var
        parts.append(body)
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _fgl_cache_path(key):
    root = os.environ.get("FGL_CACHE_DIR")
    if not root:
        return None
    os.makedirs(root, exist_ok=True)
    return os.path.join(root, "-".join(str(k) for k in key) + ".json")


# -- subcommand bodies ------------------------------------------------


def cmd_fgl(args):
    if args.theory == "morava":
        _require(args.s is not None, "morava needs -s")
        key = ("morava", args.p, args.s, args.order)
    else:
        _require(args.N is not None, "bp needs -N")
        key = ("bp", args.p, args.N, args.order)
    path = _fgl_cache_path(key)
    if path and os.path.exists(path) and args.format == "json":
        with open(path) as fh:
            print(fh.read().rstrip("\n"))
        return 0
    if args.theory == "morava":
        F = morava_fgl(args.p, args.s, order=args.order)
    else:
        F = bp_fgl(args.p, args.N, args.order)
    if args.check_axioms:
        report = fgl_axiom_check(F)
        if not report["pass"]:
            raise SolverError("FGL axiom check failed: %r" % report)
    obj = {"theory": key[0], "p": args.p,
           "s" if args.theory == "morava" else "N": key[2],
           "order": args.order, "terms": series_json(F.F)}
    text = series_text(F.F)
    if path and args.format == "json":
        with open(path, "w") as fh:
            fh.write(dump_canonical(obj) + "\n")
    _emit(args, text, obj)
    return 0


def cmd_pseries(args):
    _require(args.q >= 1, "q must be >= 1")
    if args.theory == "morava":
        _require(args.s is not None, "morava needs -s")
        order = args.order or args.q ** args.s + 1
        F = morava_fgl(args.p, args.s, order=order)
    else:
        order = args.order or 8
        F = bp_fgl(args.p, args.N or 3, order)
    qs = q_series(F, args.q, order)
    obj = {"q": args.q, "order": order, "terms": series_json(qs.series)}
    _emit(args, series_text(qs.series), obj)
    return 0


def cmd_sigma_expand(args):
    _require(args.s is not None, "-s is required")
    ks = [args.k] if args.k else list(range(1, args.p + 1))
    rows = []
    texts = []
    for k in ks:
        _require(1 <= k <= args.p, "need 1 <= k <= p")
        sk = sigma_chern_expansion(args.p, args.s, k, args.x_order)
        rows.append({"k": k, "terms": series_json(sk)})
        texts.append("sigma_%d = %s" % (k, series_text(sk)))
    _emit(args, "\n".join(texts), {"p": args.p, "s": args.s, "rows": rows})
    return 0


def cmd_lambda(args):
    _require(args.s is not None, "-s is required")
    _require(1 <= args.k <= args.p - 1, "need 1 <= k <= p-1")
    lam = morava_lambda(args.p, args.s, args.k, args.x_order)
    rows = []
    texts = []
    for i in sorted(lam):
        rows.append({"i": i, "terms": series_json(lam[i])})
        texts.append("lambda_%d = %s" % (i, _y_text(lam[i], args.p)))
    if args.format == "paper-layout":
        line = _sigma_line(args.p, args.s, args.k, lam)
        _emit(args, line)
        return 0
    obj = {"p": args.p, "s": args.s, "k": args.k, "rows": rows}
    _emit(args, "\n".join(texts) if texts else "0", obj)
    return 0


def _sigma_line(p, s, k, lam):
    """The display form sigma_k = sum_i (-lambda_i) sigma_p^i + const,
    with y = z^{p-1}."""
    from math import comb
    parts = []
    for i in sorted(lam, reverse=True):
        neg = lam[i].scalar_mul(p - 1)
        body = _y_text(neg, p)
        if "+" in body or body.startswith("-"):
            body = "(%s)" % body
        if i:
            sp = "sigma_%d" % p if i == 1 else "sigma_%d^%d" % (p, i)
            body = body + "*" + sp
        parts.append(body)
    c = comb(p, k) // p % p
    ye = (p ** s - 1) // (p - 1)
    const = (str(c) + "*" if c != 1 else "") + "v_%d*y^%d*x%s" % (
        s, ye, "" if k == 1 else "^%d" % k)
    parts.append(const)
    return "sigma_%d = %s" % (k, " + ".join(parts))


def cmd_delta_bp2(args):
    table = bp_delta_p2(c2_order=args.c2_order, z_order=args.z_order)
    rows = []
    texts = []
    for (kk, j) in sorted(table.entries):
        val = table.entries[(kk, j)]
        rows.append({"k": kk, "i": j, "value": series_json(val)})
        texts.append("delta_%d = %s" % (j, series_text(val)))
    report = reference.delta1_diff_report(table)
    texts.append("")
    texts.append("diff report against the tabulated delta_1 (mod z^8):")
    for r in report["rows"]:
        line = "  z^%d: %s" % (r["z_exp"], r["status"])
        if "computed" in r:
            line += "  computed = %s" % scalar_text(r["computed"])
        if "tabulated" in r:
            line += "  tabulated = %s%s" % (
                scalar_text(r["tabulated"]),
                "" if r["tabulated_homogeneous"] else "  [inhomogeneous]")
        texts.append(line)
    texts.append("  matches: %d  disputes: %d" % (report["matches"],
                                                  report["disputes"]))
    obj = {"theory": "BP", "entries": rows,
           "diff_report": {
               "matches": report["matches"],
               "disputes": report["disputes"],
               "rows": [{"z_exp": r["z_exp"], "status": r["status"]}
                        for r in report["rows"]]}}
    _emit(args, "\n".join(texts), obj)
    return 0


def cmd_transfer(args):
    if args.bp2:
        _require(args.k >= 0, "need k >= 0")
        theory = bp2_theory()
        expr = (transfer_x_power(args.k, theory) if args.k
                else type("E", (), {"series": theory.tr_one})())
        label = "Tr*(x^%d)" % args.k
    else:
        _require(args.s is not None, "-s is required")
        _require(1 <= args.k <= args.p - 1, "need 1 <= k <= p-1")
        expr = morava_transfer_omega(args.p, args.s, args.k, args.x_order)
        label = "Tr*(omega_%d)" % args.k
    obj = {"label": label, "terms": series_json(expr.series)}
    _emit(args, "%s = %s" % (label, series_text(expr.series)), obj)
    return 0


def cmd_euler(args):
    if args.family == "cyclic":
        _require(args.q is not None and args.q >= 1, "cyclic needs -q >= 1")
        if args.q == 1:
            _emit(args, "1", {"family": "cyclic", "q": 1, "terms": [
                {"vars": {}, "coeff": [{"mod_p": 1, "v_exp": 0}]}]})
            return 0
        desc = GroupDescriptor("cyclic", q=args.q)
    elif args.family == "product":
        _require(bool(args.orders), "product needs --orders")
        desc = GroupDescriptor("product", orders=args.orders)
    elif args.family == "sigma-p":
        desc = GroupDescriptor("sigma_p", p=args.p)
    elif args.family == "wreath":
        desc = GroupDescriptor("wreath", p=args.p, n=args.n)
    else:
        desc = GroupDescriptor("semidirect", p=args.p, n=args.n)
    _require(args.s is not None, "-s is required")
    out = stable_euler(desc, args.s)
    series = out.series if hasattr(out, "series") else out
    obj = {"family": args.family, "terms": series_json(series)}
    _emit(args, series_text(series), obj)
    return 0


def cmd_present(args):
    _require(args.s is not None, "-s is required")
    if args.family == "sigma-p":
        pres = sigma_p_presentation(args.p, args.s)
    else:
        pres = wreath_basis(args.p, args.s, args.n)
    texts = ["theory: %s" % pres.theory,
             "generators: " + ", ".join(
                 "%s (degree %d)" % g for g in pres.generators)]
    for rel in pres.relations:
        texts.append("relation: %s = 0" % series_text(rel))
    for unk in pres.unknowns:
        texts.append("unresolved: %s" % unk)
    if pres.rank is not None:
        texts.append("rank: %d" % pres.rank)
    for key, val in sorted(pres.data.items()):
        if isinstance(val, SparseSeries):
            texts.append("%s: %s" % (key, series_text(val)))
        else:
            texts.append("%s: %s" % (key, val))
    obj = {"theory": pres.theory,
           "generators": [{"name": n, "degree": d}
                          for n, d in pres.generators],
           "relations": [series_json(r) for r in pres.relations],
           "rank": pres.rank,
           "unknowns": pres.unknowns}
    _emit(args, "\n".join(texts), obj)
    return 0


def cmd_basis(args):
    _require(args.s is not None, "-s is required")
    pres = wreath_basis(args.p, args.s, args.n)
    texts = ["rank: %d" % pres.rank] + list(pres.basis)
    obj = {"rank": pres.rank, "basis": pres.basis}
    _emit(args, "\n".join(texts), obj)
    return 0


# -- oracle comparison ------------------------------------------------


def differential_suite():
    jobs = [
        {"id": "fgl-morava-3-2", "kind": "fgl", "theory": "morava",
         "p": 3, "s": 2, "order": 45},
        {"id": "fgl-morava-2-2", "kind": "fgl", "theory": "morava",
         "p": 2, "s": 2, "order": 16},
        {"id": "pseries-bp-2", "kind": "pseries", "theory": "bp",
         "p": 2, "N": 3, "q": 2, "order": 8},
    ]
    for k in (1, 2, 3):
        jobs.append({"id": "sigma-3-2-%d" % k, "kind": "sigma",
                     "p": 3, "s": 2, "k": k})
    for k in (1, 2, 3, 4, 5):
        jobs.append({"id": "sigma-5-3-%d" % k, "kind": "sigma",
                     "p": 5, "s": 3, "k": k})
    return jobs


def primary_quantity(job):
    """Canonical JSON term list for one differential-suite quantity."""
    if job["kind"] == "fgl":
        F = morava_fgl(job["p"], job["s"], order=job["order"])
        return dump_canonical(series_json(F.F))
    if job["kind"] == "pseries":
        F = bp_fgl(job["p"], job["N"], job["order"])
        return dump_canonical(series_json(
            q_series(F, job["q"], job["order"]).series))
    if job["kind"] == "sigma":
        return dump_canonical(series_json(
            sigma_chern_expansion(job["p"], job["s"], job["k"])))
    raise ValidationError("unknown job kind %r" % (job["kind"],))


def cmd_compare_oracle(args):
    jobs = differential_suite()
    if args.only:
        jobs = [j for j in jobs if j["id"] in args.only]
    for job in jobs:
        job["expected"] = primary_quantity(job)
    config = {"jobs": jobs}
    proc = subprocess.run(
        args.oracle_cmd, shell=True, input=dump_canonical(config),
        capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise SolverError("oracle exited with %d" % proc.returncode)
    report = json.loads(proc.stdout)
    failures = 0
    for result in report["results"]:
        verdict = result["verdict"]
        own = next(j["expected"] for j in jobs if j["id"] == result["id"])
        byte_match = result.get("terms") == own
        status = verdict if verdict != "match" or byte_match \
            else "verdict-terms-disagree"
        print("%-16s %s" % (result["id"], status))
        if status != "match" and verdict != "skipped":
            failures += 1
    covered = {r["id"] for r in report["results"]}
    for job in jobs:
        if job["id"] not in covered:
            print("%-16s uncovered" % job["id"])
            failures += 1
    if failures:
        raise SolverError("%d differential mismatches" % failures)
    print("all %d quantities match byte-for-byte" % len(jobs))
    return 0


# -- driver -----------------------------------------------------------


def build_parser():
    top = argparse.ArgumentParser(prog="fgltransfer")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p_, fmt="text"):
        p_.add_argument("--format", choices=("text", "json", "paper-layout"),
                        default=fmt)
        p_.add_argument("--output", default=None)

    p_ = sub.add_parser("fgl", help="formal group law expansion")
    p_.add_argument("--theory", choices=("morava", "bp"), default="morava")
    p_.add_argument("-p", type=int, required=True)
    p_.add_argument("-s", type=int)
    p_.add_argument("-N", type=int)
    p_.add_argument("--order", type=int, required=True)
    p_.add_argument("--check-axioms", action="store_true")
    common(p_)
    p_.set_defaults(fn=cmd_fgl)

    p_ = sub.add_parser("pseries", help="[q](z)")
    p_.add_argument("--theory", choices=("morava", "bp"), default="morava")
    p_.add_argument("-p", type=int, required=True)
    p_.add_argument("-s", type=int)
    p_.add_argument("-N", type=int)
    p_.add_argument("-q", type=int, required=True)
    p_.add_argument("--order", type=int)
    common(p_)
    p_.set_defaults(fn=cmd_pseries)

    p_ = sub.add_parser("sigma-expand", help="sigma_k expansions")
    p_.add_argument("-p", type=int, required=True)
    p_.add_argument("-s", type=int, required=True)
    p_.add_argument("-k", type=int)
    p_.add_argument("--x-order", type=int)
    common(p_)
    p_.set_defaults(fn=cmd_sigma_expand)

    p_ = sub.add_parser("lambda", help="lambda coefficients")
    p_.add_argument("-p", type=int, required=True)
    p_.add_argument("-s", type=int, required=True)
    p_.add_argument("-k", type=int, required=True)
    p_.add_argument("--x-order", type=int)
    common(p_, fmt="json")
    p_.set_defaults(fn=cmd_lambda)

    p_ = sub.add_parser("delta-bp2", help="BP delta table at p=2")
    p_.add_argument("--c2-order", type=int, default=4)
    p_.add_argument("--z-order", type=int, default=8)
    common(p_)
    p_.set_defaults(fn=cmd_delta_bp2)

    p_ = sub.add_parser("transfer", help="transferred Chern classes")
    p_.add_argument("-p", type=int, default=2)
    p_.add_argument("-s", type=int)
    p_.add_argument("-k", type=int, required=True)
    p_.add_argument("--bp2", action="store_true")
    p_.add_argument("--x-order", type=int)
    common(p_)
    p_.set_defaults(fn=cmd_transfer)

    p_ = sub.add_parser("euler", help="stable Euler classes Tr*(1)")
    p_.add_argument("family", choices=("cyclic", "product", "sigma-p",
                                       "wreath", "semidirect"))
    p_.add_argument("-p", type=int)
    p_.add_argument("-q", type=int)
    p_.add_argument("-n", type=int)
    p_.add_argument("-s", type=int)
    p_.add_argument("--orders", type=int, nargs="+")
    common(p_)
    p_.set_defaults(fn=cmd_euler)

    p_ = sub.add_parser("present", help="ring presentations")
    p_.add_argument("family", choices=("sigma-p", "wreath"))
    p_.add_argument("-p", type=int, required=True)
    p_.add_argument("-s", type=int, required=True)
    p_.add_argument("-n", type=int, default=1)
    common(p_)
    p_.set_defaults(fn=cmd_present)

    p_ = sub.add_parser("basis", help="module basis enumeration")
    p_.add_argument("-p", type=int, required=True)
    p_.add_argument("-s", type=int, required=True)
    p_.add_argument("-n", type=int, default=1)
    common(p_)
    p_.set_defaults(fn=cmd_basis)

    p_ = sub.add_parser("compare-oracle",
                        help="differential test against the oracle")
    p_.add_argument("--oracle-cmd", default="python3 -m fgl_oracle")
    p_.add_argument("--only", nargs="+")
    common(p_)
    p_.set_defaults(fn=cmd_compare_oracle)
    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, GroupError, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except (SolverError, SeriesError, RingError) as exc:
        sys.stderr.write("consistency failure: %s\n" % exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())

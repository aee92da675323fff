"""Command-line front end: analyze, constant, count, redei, verify."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .brgroup import enumerate_bmsub, enumerate_ralt
from .census import CensusRequest, count, redei_count, redei_report, report
from .checks import SUITES
from .errors import CensusError, DomainError, FamilyError, FamilySyntaxError, InputError
from .f2res import build_residue_data, fmt
from .family import load_family
from .localdens import admissible, leading_constant


def q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _space(V) -> str:
    return "{" + ", ".join(fmt(x) for x in V.elements()) + "}"


def analyze_text(fam) -> str:
    res = build_residue_data(fam)
    out = io.StringIO()
    w = out.write
    w(f"family {fam.digest()} n={fam.n} m={fam.m} mode={fam.mode}\n")
    w(fam.serialize())
    w(f"gamma = {q(res.gamma)}  delta = {q(res.delta)}\n\n")
    w("S | V_S | W_S | in_D | c_S\n")
    for S in res.subsets:
        r = res[S]
        w(f"{fmt(S)} | {_space(r.V)} | {_space(r.W)} | {int(r.in_D)} | {r.c}\n")
    ralt = enumerate_ralt(res)
    w(f"\nRAlt ({len(ralt)} maps)\n")
    w("S | " + " | ".join(f"f{k}" for k in range(len(ralt))) + "\n")
    for S in res.subsets:
        w(fmt(S) + " | " + " | ".join(fmt(f(S)) for f in ralt) + "\n")
    bm = enumerate_bmsub(res)
    w(f"\nBM_Sub ({len(bm)} elements, {sum(g.is_pbm for g in bm)} projective)\n")
    for g in bm:
        w(f"{g.label()} pbm={int(g.is_pbm)}\n")
    adm = admissible(fam)
    w(f"\nadmissible signs ({len(adm.signs)})\n")
    for s in adm.signs:
        w(" ".join(f"{x:+d}" for x in s) + "\n")
    w(f"admissible 2-adic classes: {len(adm.two_adic)}\n")
    return out.getvalue()


def prediction_json(pred) -> dict:
    return {
        "mode": pred.mode,
        "delta": q(pred.delta),
        "log_exponent": q(pred.log_exponent),
        "constant": pred.constant,
        "per_f": {g.label(): v for g, v in pred.per_f.items()},
        "primes_bound": pred.primes_bound,
        "error_estimate": pred.error_estimate,
        "gamma_values": [q(x) for x in pred.gamma_values],
    }


def _emit(data: dict, out_path: str | None):
    if out_path is None:
        print(json.dumps(data, indent=2))
        return
    if out_path.endswith(".csv"):
        with open(out_path, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh)
            strata = data.get("per_stratum")
            if strata:
                wr.writerow(["stratum", "count", "predicted"])
                for k, v in strata.items():
                    wr.writerow([k, v["count"], v["predicted"]])
            else:
                flat = {k: v for k, v in data.items() if not isinstance(v, dict)}
                wr.writerow(list(flat))
                wr.writerow(list(flat.values()))
        return
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def _bounds(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CensusError(f"bad sweep list {text!r}") from None


def _emit_rows(rows: list[dict], out_path: str | None):
    if out_path and out_path.endswith(".csv"):
        with open(out_path, "w", newline="", encoding="utf-8") as fh:
            wr = csv.DictWriter(fh, fieldnames=["bound", "observed", "predicted", "ratio", "trend"])
            wr.writeheader()
            wr.writerows(rows)
        return
    _emit({"rows": rows}, out_path)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conicfib", description=__doc__)
    sub = ap.add_subparsers(dest="verb", required=True)

    a = sub.add_parser("analyze", help="print residue spaces and Brauer tables")
    a.add_argument("--family", required=True)

    c = sub.add_parser("constant", help="leading constant as JSON")
    c.add_argument("--family", required=True)
    c.add_argument("--mode", choices=["affine", "projective", "squarefree"])
    c.add_argument("--primes-bound", type=int, default=10**5)
    c.add_argument("--flip", action="store_true", help="use the other section choice")
    c.add_argument("--out")

    n = sub.add_parser("count", help="count locally soluble fibres")
    n.add_argument("--family", required=True)
    n.add_argument("--mode", choices=["affine", "projective", "squarefree"])
    n.add_argument("--bound", type=int, required=True)
    n.add_argument("--sweep", help="comma-separated bounds; emits one row per bound")
    n.add_argument("--stratify", action="store_true")
    n.add_argument("--threads", type=int)
    n.add_argument("--sample", type=float, metavar="RATE")
    n.add_argument("--seed", type=int)
    n.add_argument("--primes-bound", type=int, default=10**5)
    n.add_argument("--out")
    n.add_argument("--no-timing", action="store_true")

    r = sub.add_parser("redei", help="count Redei triples")
    r.add_argument("--bound", type=int, required=True)
    r.add_argument("--sweep", help="comma-separated bounds; emits one row per bound")
    r.add_argument("--primes-bound", type=int, default=10**5)
    r.add_argument("--out")
    r.add_argument("--no-timing", action="store_true")

    v = sub.add_parser("verify", help="run an invariant suite")
    v.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.verb == "analyze":
            sys.stdout.write(analyze_text(load_family(args.family)))
            return 0
        if args.verb == "constant":
            fam = load_family(args.family)
            pred = leading_constant(fam, args.mode, args.primes_bound, flip=args.flip)
            _emit(prediction_json(pred), args.out)
            return 0
        if args.verb == "count":
            fam = load_family(args.family)
            req = CensusRequest(fam, args.bound, args.mode, args.stratify, args.threads,
                                args.sample, args.seed, args.primes_bound)
            if args.sweep:
                _emit_rows(report(req, _bounds(args.sweep)), args.out)
            else:
                _emit(count(req).to_json(timing=not args.no_timing), args.out)
            return 0
        if args.verb == "redei":
            if args.sweep:
                _emit_rows(redei_report(_bounds(args.sweep), args.primes_bound), args.out)
            else:
                res = redei_count(args.bound, args.primes_bound)
                _emit(res.to_json(timing=not args.no_timing), args.out)
            return 0
        names = sorted(SUITES) if args.suite == "all" else [args.suite]
        ok = True
        for name in names:
            result = SUITES[name]()
            print(f"[{'PASS' if result.ok else 'FAIL'}] {name}")
            for line in result.lines:
                print("  " + line)
            ok &= result.ok
        return 0 if ok else 1
    except (FamilySyntaxError, FamilyError, CensusError, DomainError, InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())

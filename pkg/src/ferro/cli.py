"""Command-line front end.

Exit status: 0 on success (and agreement), 1 when a verification finds a
disagreement, 2 on usage errors.  Errors go to stderr as a single line
``error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import sys

from ferro import atlas
from ferro.brackets import bracket, cyclotomic_number
from ferro.circularity import CircularityVerdict, is_circular, is_circular_pair, verify_witness
from ferro.counting import BudgetExceeded, count_report
from ferro.design import build_design, max_pair_intersection, verify_2design
from ferro.ff import DenseField, FieldError, FieldSpec, PolyField, factorize, format_poly
from ferro.subgroup import SubgroupCtx


class UsageError(Exception):
    pass


def _emit(data: dict, fmt: str, text: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _dense(q: int) -> DenseField:
    try:
        return DenseField(FieldSpec.from_order(q))
    except FieldError as exc:
        raise UsageError(str(exc)) from exc


def _ctx(q: int, k: int) -> SubgroupCtx:
    F = _dense(q)
    try:
        return SubgroupCtx(F, k)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc


def _element(F, n: int, name: str):
    try:
        return F.from_int(n)
    except FieldError as exc:
        raise UsageError(f"--{name}: {exc}") from exc


def cmd_field_info(args) -> int:
    try:
        spec = FieldSpec.from_order(args.q)
        F = DenseField(spec) if args.backend == "dense" else PolyField(spec)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    data = {
        "q": F.q, "p": F.p, "r": F.r, "backend": F.backend,
        "modulus": list(F.modulus), "modulus_text": format_poly(F.modulus),
        "q_minus_1": [list(t) for t in factorize(F.q - 1)] if F.q < 1 << 62 else None,
    }
    if isinstance(F, DenseField):
        data["zeta"] = F.zeta_int
    lines = [f"{spec}: p={F.p} r={F.r} backend={F.backend}", f"modulus: {format_poly(F.modulus)}"]
    if "zeta" in data:
        lines.append(f"zeta: {data['zeta']}")
    _emit(data, args.format, "\n".join(lines))
    return 0


WITNESS_K_LIMIT = 2000  # collision search is O(k^2)


def _witness_field(verdict: CircularityVerdict, method: str):
    spec = FieldSpec.from_order(verdict.q)
    return DenseField(spec) if method == "direct" else PolyField(spec)


def cmd_circular(args) -> int:
    try:
        verdict = is_circular_pair(args.p, args.k, method=args.method)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    data = verdict.as_dict()
    word = "circular" if verdict.circular else "non-circular"
    lines = [f"(p={args.p}, k={args.k}) {word} [method: {verdict.method}]"]
    if verdict.q:
        lines[0] += f" in GF({verdict.q})"
    if verdict.detail:
        lines.append(f"reason: {verdict.detail}")
    witnessed = verdict
    if verdict.method.startswith("prefilter") and args.k <= WITNESS_K_LIMIT:
        # a prefilter only proves failure; run the full test to exhibit it
        method = "direct" if args.method == "direct" else "collision"
        witnessed = is_circular(SubgroupCtx(_witness_field(verdict, method), args.k), method, prefilter=False)
        if witnessed.circular:
            print(f"error: disagreement: prefilter rejected {args.p},{args.k} but {method} finds it circular",
                  file=sys.stderr)
            _emit(data, args.format, "\n".join(lines))
            return 1
    if witnessed.witness is not None:
        kind = "direct" if witnessed.witness["kind"] == "triple" else "collision"
        ok = verify_witness(SubgroupCtx(_witness_field(witnessed, kind), args.k), witnessed)
        data["witness"] = witnessed.witness
        data["witness_verified"] = ok
        lines.append("witness: " + json.dumps(witnessed.witness))
        lines.append(f"witness verified: {ok}")
        if not ok:
            print("error: disagreement: witness failed re-verification", file=sys.stderr)
            _emit(data, args.format, "\n".join(lines))
            return 1
    _emit(data, args.format, "\n".join(lines))
    return 0


def cmd_pk(args) -> int:
    try:
        report = atlas.scan_pk(args.k, args.max_prime, workers=args.jobs)
    except (atlas.InsufficientBound, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    status = 0
    diff = None
    if args.compare_table:
        try:
            diff = atlas.table1_compare(report)
        except atlas.InsufficientBound as exc:
            raise UsageError(str(exc)) from exc
        if diff:
            status = 1
    if report.alerts:
        status = 1
        for alert in report.alerts:
            print(f"error: alert: {alert}", file=sys.stderr)
    if args.format == "json":
        sys.stdout.write(report.to_json())
    elif args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        members = ", ".join(str(p) for p in report.member_primes())
        lines = [
            f"P_{report.k} = {{{members}}} (primes <= {report.max_prime})",
            f"p_k={report.p_k} n_k={report.n_k} pi_k={report.pi_k} ratio={report.ratio}",
        ]
        lines += [f"  {m.p}: {m.method}" for m in report.members]
        if diff is not None:
            lines.append("table: match" if not diff else "table: MISMATCH " + json.dumps(diff))
        sys.stdout.write("\n".join(lines) + "\n")
    if diff:
        print(f"error: disagreement: table mismatch {json.dumps(diff)}", file=sys.stderr)
    return status


def cmd_count(args) -> int:
    ctx = _ctx(args.q, args.k)
    try:
        report = count_report(ctx, oracle=args.oracle, formulas=args.verify)
    except BudgetExceeded as exc:
        raise UsageError(str(exc)) from exc
    data = report.as_dict()
    N = report.values("N")
    Np = report.values("Nprime")
    lines = [f"q={report.q} k={report.k} m={report.m}", f"N={N[0]} N'={Np[0]}"]
    for key in ("naive", "structured", "general", "theorem1"):
        n_val = getattr(report, f"N_{key}")
        if n_val is not None:
            lines.append(f"  {key:<10} N={n_val} N'={getattr(report, f'Nprime_{key}')}")
    lines.append(f"  s={report.s} t={report.t}" if report.s is not None else "")
    if args.verify:
        if report.circular:
            lines.append("circular: all methods agree" if report.agreement else "circular: DISAGREEMENT")
        else:
            lines.append("non-circular: formulas not applicable; oracles "
                         + ("agree" if report.agreement else "DISAGREE"))
    _emit(data, args.format, "\n".join(x for x in lines if x))
    if not report.agreement:
        print(f"error: disagreement: counts differ {json.dumps(data)}", file=sys.stderr)
        return 1
    return 0


def cmd_bracket(args) -> int:
    ctx = _ctx(args.q, args.k)
    F = ctx.field
    a = _element(F, args.a, "a")
    c = _element(F, args.c, "c")
    if a == F.zero:
        raise UsageError("--a must be nonzero")
    value = bracket(ctx, a, c)
    _emit({"q": args.q, "k": args.k, "a": args.a, "c": args.c, "bracket": value},
          args.format, f"[{args.a},{args.c}]_{args.k} = {value}")
    return 0


def cmd_cyclo(args) -> int:
    ctx = _ctx(args.q, args.k)
    value = cyclotomic_number(ctx, args.h, args.l)
    _emit({"q": args.q, "k": args.k, "m": ctx.m, "h": args.h, "l": args.l, "value": value},
          args.format, f"({args.h},{args.l})_{ctx.m} = {value}")
    return 0


def cmd_design(args) -> int:
    ctx = _ctx(args.q, args.k)
    try:
        design = build_design(ctx)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    v, b, r, k, lam = design.params
    lines = [f"design q={args.q} k={args.k}: (v,b,r,k,lambda) = ({v},{b},{r},{k},{lam})"]
    data = {"q": args.q, "k": args.k, "params": list(design.params)}
    status = 0
    if args.check:
        rep = verify_2design(design)
        mx = max_pair_intersection(design)
        circ = is_circular(ctx, "direct", prefilter=False).circular
        consistent = (mx <= 2) == circ
        data.update({"valid_2design": rep.valid, "max_intersection": mx, "circular": circ,
                     "consistent": consistent})
        lines.append(f"2-design: {'valid' if rep.valid else 'INVALID'} (distinct blocks {rep.distinct_blocks}, "
                     f"r {rep.replication}, lambda {rep.pair_counts})")
        lines.append(f"max block intersection: {mx}; circular: {circ}")
        if not (rep.valid and consistent):
            status = 1
            print("error: disagreement: design check failed", file=sys.stderr)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(design.to_json())
        lines.append(f"wrote {args.out}")
    _emit(data, args.format, "\n".join(lines))
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ferro", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, formats=("text", "json")):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=formats, default="text")
        return sp

    sp = add("field-info", cmd_field_info, "describe GF(q)")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--backend", choices=("dense", "poly"), default="poly")

    sp = add("circular", cmd_circular, "decide circularity of (p, k)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--method", choices=("auto", "direct", "collision"), default="auto")

    sp = add("pk", cmd_pk, "compute the exceptional prime set P_k", formats=("text", "json", "csv"))
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--max-prime", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--compare-table", action="store_true")

    sp = add("count", cmd_count, "count solutions of x^m + y^m - z^m = 1")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--oracle", choices=("naive", "structured", "both"), default="both")
    sp.add_argument("--verify", action="store_true", help="also evaluate the formulas and require agreement")

    sp = add("bracket", cmd_bracket, "intersection number [a, c]_k")
    for flag in ("--q", "--k", "--a", "--c"):
        sp.add_argument(flag, type=int, required=True)

    sp = add("cyclo", cmd_cyclo, "cyclotomic number (h, l)_m")
    for flag in ("--q", "--k", "--h", "--l"):
        sp.add_argument(flag, type=int, required=True)

    sp = add("design", cmd_design, "build and check the block design")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--check", action="store_true")
    sp.add_argument("--out", default=None)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) is not None and getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except (FieldError, ValueError) as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 2
    except atlas.ScanError as exc:
        print(f"error: scan: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

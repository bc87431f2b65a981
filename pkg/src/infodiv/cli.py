"""Command-line interface.

Commands: ``entropy``, ``matrix``, ``select``, ``redundancy``, ``verify``.
Exit codes: 0 success, 1 usage or input error, 2 a proved property was
violated during ``verify``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

from .distribution import InfoSummary, summarize, triple_entropies, triple_summaries
from .divergence import evaluate, format_spec, parse_spec
from .errors import InfoDivError
from .io import read_joint_json, read_triple_json
from .selection import Dataset, detect_redundant, forward_select, pair_summary

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2
BASES = {"e": 1.0, "2": math.log(2.0), "10": math.log(10.0)}
SUMMARY_FIELDS = ("h_x", "h_y", "h_joint", "h_x_given_y", "h_y_given_x", "mi")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _nonneg_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v >= 0.0 or math.isinf(v):
        raise argparse.ArgumentTypeError("must be a finite nonnegative number")
    return v


def _alpha(text: str) -> float:
    v = _nonneg_float(text)
    if v > 1.0:
        raise argparse.ArgumentTypeError("must lie in [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="input file (CSV samples or JSON distribution)")
    common.add_argument("--format", choices=("csv", "joint-json", "triple-json"), default="csv")
    common.add_argument("--spec", default="I", help='complexity spec, e.g. "E", "S:0.3", "convex:0.3*E+0.7*I"')
    common.add_argument("--alpha", type=_alpha, default=None, help="weight for specs given without one")
    common.add_argument("--base", choices=tuple(BASES), default="e", help="logarithm base for displayed nats")
    common.add_argument("--output", choices=("json", "csv", "text"), default=None)
    common.add_argument("--normalized", action="store_true", help="use the normalized divergence")
    common.add_argument("--target", default=None, help="target column")

    parser = _Parser(prog="infodiv", description="Information-based divergences between categorical variables.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("entropy", parents=[common], help="entropies and pairwise summaries")
    sub.add_parser("matrix", parents=[common], help="pairwise divergence matrix")
    p = sub.add_parser("select", parents=[common], help="greedy forward selection")
    p.add_argument("--max-features", type=_positive_int, default=None)
    p.add_argument("--min-improvement", type=_nonneg_float, default=1e-12)
    p = sub.add_parser("redundancy", parents=[common], help="near-equivalent covariate pairs")
    p.add_argument("--threshold", type=_nonneg_float, default=0.1)
    p = sub.add_parser("verify", parents=[common], help="run the property harness")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=_positive_int, default=1000)
    return parser


# ---------------------------------------------------------------- rendering

def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    return "" if v is None else str(v)


def _render_rows(rows: list[dict], columns: Sequence[str], output: str) -> str:
    if output == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in columns])
        return buf.getvalue()
    cells = [list(columns)] + [[_fmt(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "".join("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n" for row in cells)


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _render_json(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2, allow_nan=False) + "\n"


# ---------------------------------------------------------------- loading

def _require_input(args) -> str:
    if not args.input:
        raise UsageError("--input is required")
    return args.input


def _load_named_summaries(args) -> tuple[list[str], dict[tuple[str, str], InfoSummary], dict[str, float]]:
    """Variable names, summaries for every ordered pair i <= j, and marginal entropies."""
    path = _require_input(args)
    if args.format == "csv":
        data = Dataset.from_csv(path)
        names = list(data.columns)
        pairs = {(a, b): pair_summary(data, a, b) for i, a in enumerate(names) for b in names[i:]}
    elif args.format == "joint-json":
        s = summarize(read_joint_json(path))
        names = ["X", "Y"]
        pairs = {("X", "X"): _self_summary(s.h_x), ("X", "Y"): s, ("Y", "Y"): _self_summary(s.h_y)}
    else:
        t = read_triple_json(path)
        s_xy, s_xz, s_yz = triple_summaries(t)
        names = ["X", "Y", "Z"]
        pairs = {("X", "Y"): s_xy, ("X", "Z"): s_xz, ("Y", "Z"): s_yz}
        for n, h in zip(names, (s_xy.h_x, s_xy.h_y, s_xz.h_y)):
            pairs[(n, n)] = _self_summary(h)
    entropies = {n: pairs[(n, n)].h_x for n in names}
    return names, pairs, entropies


def _self_summary(h: float) -> InfoSummary:
    return InfoSummary.from_entropies(h, h, h)


def _dataset(args) -> Dataset:
    if args.format != "csv":
        raise UsageError(f"command {args.command!r} needs --format csv")
    return Dataset.from_csv(_require_input(args))


def _spec(args):
    return parse_spec(args.spec, default_alpha=0.5 if args.alpha is None else args.alpha)


# ---------------------------------------------------------------- commands

def cmd_entropy(args) -> tuple[int, str]:
    scale = BASES[args.base]
    names, pairs, entropies = _load_named_summaries(args)
    rows = []
    for (a, b), s in pairs.items():
        row = {"x": a, "y": b}
        row.update({k: v / scale for k, v in s.as_dict().items()})
        rows.append(row)
    output = args.output or "json"
    if output == "json":
        extra = {}
        if args.format == "triple-json":
            extra["h_xyz"] = triple_entropies(read_triple_json(args.input))[6] / scale
        return EXIT_OK, _render_json({
            "base": args.base,
            "entropies": {n: h / scale for n, h in entropies.items()},
            "pairs": rows,
            **extra,
        })
    return EXIT_OK, _render_rows(rows, ("x", "y") + SUMMARY_FIELDS, output)


def cmd_matrix(args) -> tuple[int, str]:
    spec = _spec(args)
    scale = 1.0 if args.normalized else BASES[args.base]
    names, pairs, _ = _load_named_summaries(args)
    value = {}
    for (a, b), s in pairs.items():
        if a == b:
            v = 0.0
        else:
            r = evaluate(spec, s)
            v = (r.nib if args.normalized else r.ib) / scale
        value[(a, b)] = value[(b, a)] = v
    matrix = [[value[(a, b)] for b in names] for a in names]
    output = args.output or "json"
    if output == "json":
        return EXIT_OK, _render_json({
            "spec": format_spec(spec),
            "normalized": args.normalized,
            "base": None if args.normalized else args.base,
            "columns": names,
            "matrix": matrix,
        })
    rows = [{"column": a, **{b: value[(a, b)] for b in names}} for a in names]
    return EXIT_OK, _render_rows(rows, ["column"] + names, output)


def cmd_select(args) -> tuple[int, str]:
    if not args.target:
        raise UsageError("--target is required")
    data = _dataset(args)
    spec = _spec(args)
    trace = forward_select(spec, data, args.target, args.max_features, args.min_improvement, args.normalized)
    scale = 1.0 if args.normalized else BASES[args.base]
    out = trace.as_dict()
    for step in out["steps"]:
        for key in ("divergence", "improvement"):
            if step[key] is not None:
                step[key] /= scale
    if out["baseline"] is not None:
        out["baseline"] /= scale
    out["spec"] = format_spec(spec)
    out["base"] = None if args.normalized else args.base
    output = args.output or "json"
    if output == "json":
        return EXIT_OK, _render_json(out)
    text = _render_rows(out["steps"], ("column", "divergence", "accepted", "improvement"), output)
    if output == "text":
        text += f"stopping_reason: {out['stopping_reason']}\n"
    return EXIT_OK, text


def cmd_redundancy(args) -> tuple[int, str]:
    data = _dataset(args)
    spec = _spec(args)
    pairs = detect_redundant(spec, data, args.threshold, target=args.target)
    rows = [p.as_dict() for p in pairs]
    output = args.output or "csv"
    if output == "json":
        return EXIT_OK, _render_json({"spec": format_spec(spec), "threshold": args.threshold, "pairs": rows})
    return EXIT_OK, _render_rows(rows, ("col_a", "col_b", "divergence", "bound"), output)


def cmd_verify(args) -> tuple[int, str]:
    from .properties.harness import run_verification

    report = run_verification(seed=args.seed, trials=args.trials)
    code = EXIT_OK if report["ok"] else EXIT_VIOLATION
    output = args.output or "json"
    if output == "json":
        return code, _render_json(report)
    rows = []
    for c in report["checks"]:
        verdict = "PASS" if c["violations"] == 0 else ("FAIL" if c["status"] == "proved" else "FLAG")
        rows.append({"result": verdict, "status": c["status"], "name": c["name"], "trials": c["trials"],
                     "violations": c["violations"], "min_slack": c["min_slack"]})
    return code, _render_rows(rows, ("result", "status", "name", "trials", "violations", "min_slack"), output)


COMMANDS = {
    "entropy": cmd_entropy,
    "matrix": cmd_matrix,
    "select": cmd_select,
    "redundancy": cmd_redundancy,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = COMMANDS[args.command](args)
    except (UsageError, InfoDivError, OSError) as exc:
        print(f"infodiv {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line interface.

Subcommands ``norms``, ``verify``, ``growth``, ``compare`` and ``divergence``
emit CSV (default) or JSON. Exit codes: 0 success, 1 verification failure,
2 usage or parse error, 3 ball-enumeration budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .cocycle import Construction
from .errors import BudgetExceeded, CocycleError
from .groups import eval_word, parse_group_spec, parse_word
from .metric import DEFAULT_BUDGET, LengthFunction, growth_constant
from .scaling import ScaleParams
from .verify import VerifyConfig, c_prime, divergence_partial_sums, run_full_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

NORMS_COLUMNS = ["group", "k", "n", "gamma", "gamma_length", "block_norm",
                 "upper_bound", "lower_bound", "envelope"]
GROWTH_COLUMNS = ["R", "ball_cardinality", "log_card_over_R"]
DIVERGENCE_COLUMNS = ["M", "partial_sum", "iterlog_next"]


def fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    def conv(v):
        if isinstance(v, float):
            return float(f"{v:.12g}") if math.isfinite(v) else str(v)
        if isinstance(v, dict):
            return {k: conv(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [conv(x) for x in v]
        return v
    return json.dumps(conv(obj), indent=2) + "\n"


def _records(header, rows):
    return [dict(zip(header, row)) for row in rows]


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _setup(args):
    model = parse_group_spec(args.group)
    L = LengthFunction(model, budget=args.budget)
    gammas = [(w, eval_word(model, parse_word(model, w))) for w in (args.gamma or [])]
    return model, L, gammas


def norm_rows(model, L, k: int, n_max: int, gammas):
    """One row per (gamma, n) with the block norm and both norm bounds."""
    C = Construction(L, ScaleParams(k))
    cp = c_prime(growth_constant(L, n_max).a)
    rows = []
    for _, g in gammas:
        d = L(g)
        vec = C.vector(g, n_max)
        for blk in vec.blocks:
            n = blk.n
            env = C.params.slope(n)
            lower = 2 ** (1.0 / (2 * n)) / C.params.scale(n) if d > 2 * n else ""
            rows.append([model.name, k, n, model.format_element(g), d, blk.norm_2n,
                         cp * d * env, lower, env])
    return rows


def cmd_norms(args) -> int:
    model, L, gammas = _setup(args)
    if not gammas:
        gammas = [("", model.identity)]
    rows = norm_rows(model, L, args.k, args.nmax, gammas)
    if args.format == "json":
        _emit(args, _json(_records(NORMS_COLUMNS, rows)))
    else:
        _emit(args, _csv(NORMS_COLUMNS, rows))
    return EXIT_OK


def cmd_growth(args) -> int:
    model = parse_group_spec(args.group)
    L = LengthFunction(model, budget=args.budget)
    est = growth_constant(L, args.nmax)
    rows = [[R, card, math.log(card) / R] for R, card in est.per_radius]
    if args.format == "json":
        _emit(args, _json({"group": model.name, "a": est.a,
                           "certified_max_radius": est.max_radius,
                           "rows": _records(GROWTH_COLUMNS, rows)}))
    else:
        rows.append(["a", est.a, f"certified_max_radius={est.max_radius}"])
        _emit(args, _csv(GROWTH_COLUMNS, rows))
    return EXIT_OK


def _k_list(values):
    out = []
    for v in values or ["0,1"]:
        out.extend(int(x) for x in str(v).split(",") if x.strip())
    for k in out:
        if k < 0:
            raise argparse.ArgumentTypeError(f"k must be >= 0, got {k}")
    return out


def cmd_compare(args) -> int:
    model, L, gammas = _setup(args)
    if not gammas:
        gammas = [("", model.identity)]
    ks = _k_list(args.k)
    header = ["gamma", "n", "reference_1_over_n"]
    for k in ks:
        header += [f"norm_k{k}", f"envelope_k{k}"]
    rows = []
    for _, g in gammas:
        vecs = [Construction(L, ScaleParams(k)).vector(g, args.nmax) for k in ks]
        for n in range(1, args.nmax + 1):
            row = [model.format_element(g), n, 1.0 / n]
            for k, vec in zip(ks, vecs):
                row += [vec.block(n).norm_2n, ScaleParams(k).slope(n)]
            rows.append(row)
    if args.format == "json":
        _emit(args, _json(_records(header, rows)))
    else:
        _emit(args, _csv(header, rows))
    return EXIT_OK


def cmd_divergence(args) -> int:
    table = divergence_partial_sums(ScaleParams(args.k), args.nmax, args.tolerance)
    rows = [list(r) for r in table.rows]
    if args.format == "json":
        _emit(args, _json({
            "k": table.k, "N": table.N, "tolerance": table.tolerance,
            "rows": _records(DIVERGENCE_COLUMNS, rows),
            "comparisons": [dict(zip(["M1", "M2", "partial_sum_diff", "iterlog_diff"], c))
                            for c in table.comparisons],
            "pass": table.passed,
        }))
    else:
        _emit(args, _csv(DIVERGENCE_COLUMNS, rows))
    return EXIT_OK if table.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    config = VerifyConfig(group=args.group, k=args.k, n_max=args.nmax,
                          gammas=list(args.gamma or []), trials=args.trials, seed=args.seed,
                          budget=args.budget, samples=args.samples,
                          slope_error=args.inject_slope_error or 0.0)
    report = run_full_report(config)
    if args.format == "csv":
        header = ["check", "status", "margin", "cases", "skipped", "tight"]
        rows = [[c.name, c.status, "" if c.margin is None else c.margin, c.cases,
                 c.skipped, c.tight] for c in report.checks]
        rows.append(["summary", report.summary, "", "", "", ""])
        _emit(args, _csv(header, rows))
    else:
        _emit(args, report.to_json())
    for c in report.failures():
        print(f"FAIL {c.name}: witness {json.dumps(c.witness)}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affine-cocycles",
        description="Tent-function cocycles for proper affine actions on sums of l^{2n}.",
    )
    parser.add_argument("--config", help="flat key=value file mirroring the flags")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, nmax_default=8, k_single=True, group_default=None):
        p.add_argument("--group", default=group_default, required=group_default is None,
                       help="free:<r>, zd:<d>, heis3 or finite:<path>")
        if k_single:
            p.add_argument("--k", type=_nonneg, default=1, help="number of iterated-log factors")
        p.add_argument("--nmax", type=_positive, default=nmax_default)
        p.add_argument("--gamma", action="append", help="group word (repeatable)")
        p.add_argument("--trials", type=_positive, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                       help="max elements per ball enumeration")

    p = sub.add_parser("norms", help="block norms ||b_n(gamma)||_{2n} with bounds")
    common(p)
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("verify", help="run every check and emit a report")
    common(p, nmax_default=6, group_default="zd:2")
    p.set_defaults(format="json")
    p.add_argument("--samples", type=_positive, default=1000,
                   help="random samples for the group and metric axioms")
    p.add_argument("--inject-slope-error", type=float, nargs="?", const=0.5, default=0.0,
                   help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("growth", help="ball cardinalities and the growth constant a")
    common(p)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("compare", help="block norms and envelopes for several k side by side")
    common(p, k_single=False)
    p.add_argument("--k", action="append", help="k values, comma separated or repeated")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("divergence", help="partial sums of 1/(n l_1(n)...l_k(n))")
    common(p, nmax_default=10_000, group_default="zd:1")
    p.add_argument("--tolerance", type=float, default=0.1)
    p.set_defaults(func=cmd_divergence)
    return parser


def _config_argv(path: str) -> list[str]:
    out = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CocycleError(f"config line {raw!r} is not key=value")
        out += ["--" + key.strip().replace("_", "-"), value.strip()]
    return out


def _expand_config(argv: list[str]) -> list[str]:
    """Splice ``--config`` entries in right after the subcommand; explicit flags win."""
    for i, tok in enumerate(argv):
        if tok == "--config" or tok.startswith("--config="):
            path = tok.split("=", 1)[1] if "=" in tok else argv[i + 1]
            rest = argv[:i] + argv[i + (1 if "=" in tok else 2):]
            extra = _config_argv(path)
            cmd = next((j for j, t in enumerate(rest) if not t.startswith("-")), len(rest))
            return rest[: cmd + 1] + extra + rest[cmd + 1:]
    return argv


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _expand_config(argv)
    except (OSError, CocycleError, IndexError) as exc:
        print(f"error: bad --config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CocycleError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: count, analyze, surgery, verify, sample.

Machine-readable output (JSON by default, CSV on request) goes to stdout
or --out; human summaries go to stderr.  Exit codes: 0 success, 1 domain
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import montecarlo, structure, surgery, verify
from .counting import (
    build_counts_table,
    connective_estimates,
    kesten_partial_sums,
    mu_hat_from_table,
)
from .errors import BudgetExceeded, ConsistencyError, WalkError
from .structure import analyze
from .walks import parse, serialize, walk_to_json_dict

#: cmd_verify is exhaustive over all bridges; refuse lengths that would
#: not terminate in minutes.
VERIFY_BUDGETS = {2: 12, 3: 7}


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dump(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _cmd_count(args: argparse.Namespace) -> int:
    table = build_counts_table(args.max_n, args.d, workers=args.threads)
    audit = kesten_partial_sums(table, mu_hat_from_table(table))
    if args.format == "csv":
        _emit(table.to_csv(), args.out)
    else:
        _emit(_json_dump(table.to_json_dict()), args.out)
    print(f"# mu_hat = c_{table.max_n}^(1/{table.max_n}) = {audit.mu_hat!r}", file=sys.stderr)
    print("# L,S_L (truncated irreducible-bridge sums)", file=sys.stderr)
    for idx, s in enumerate(audit.partial_sums, start=1):
        print(f"#   {idx},{s!r}", file=sys.stderr)
    print("# n, c_n^(1/n) upper bound, c_(n+1)/c_n ratio", file=sys.stderr)
    for est in connective_estimates(table):
        ratio = "" if est.ratio is None else repr(est.ratio)
        print(f"#   {est.n},{est.upper_bound!r},{ratio}", file=sys.stderr)
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    walk = parse(args.walk, args.d)
    report = analyze(walk)
    payload = {"walk": walk_to_json_dict(walk), **report.to_json_dict()}
    _emit(_json_dump(payload), args.out)
    return 0


def _cmd_surgery(args: argparse.Namespace) -> int:
    walk = parse(args.walk, args.d)
    try:
        i_s, j_s = args.params.split(",")
        i, j = int(i_s), int(j_s)
    except ValueError:
        print(f"error: --params must be 'i,j', got {args.params!r}", file=sys.stderr)
        return 2
    if args.op == "unfold":
        out = surgery.unfold(walk, (i, j))
    else:
        out = surgery.stickbreak(walk, i, j)
    payload = {
        "op": args.op,
        "params": {"i": i, "j": j},
        "input": walk_to_json_dict(walk),
        "output": walk_to_json_dict(out),
        "input_report": analyze(walk).to_json_dict(),
        "output_report": analyze(out).to_json_dict(),
    }
    _emit(_json_dump(payload), args.out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    budget = VERIFY_BUDGETS.get(args.d)
    if budget is None:
        print(f"error: no exhaustive-verification budget for d={args.d}", file=sys.stderr)
        return 2
    if args.max_n > budget:
        print(
            f"error: --max-n {args.max_n} exceeds the exhaustive budget {budget} for d={args.d}",
            file=sys.stderr,
        )
        return 2
    results = verify.run_lemma_suite(args.max_n, args.d)
    lines = [r.line() for r in results]
    _emit("\n".join(lines) + "\n", args.out)
    if all(r.passed for r in results):
        return 0
    return 1


def _cmd_sample(args: argparse.Namespace) -> int:
    if args.mu_hat is None:
        table = build_counts_table(args.table_n, args.d, workers=args.threads)
        mu_hat = mu_hat_from_table(table)
    else:
        mu_hat = args.mu_hat
    law = montecarlo.build_truncated_law(args.L, mu_hat, args.d)
    if args.experiment == "stickbreak":
        report = montecarlo.stickbreak_experiment(
            law,
            n_blocks=args.blocks,
            windows=tuple(args.windows),
            n_samples=args.samples,
            seed=args.seed,
        )
        _emit(report.to_json() + "\n", args.out)
        print(
            f"# processed {report.n_processed}, skipped {report.n_skipped}, "
            f"self-avoiding {report.n_self_avoiding}",
            file=sys.stderr,
        )
        return 0
    stats = montecarlo.run_stats(
        law,
        n_blocks=args.blocks,
        n_samples=args.samples,
        seed=args.seed,
        workers=args.threads,
    )
    _emit(stats.to_csv() if args.format == "csv" else stats.to_json() + "\n", args.out)
    print(
        f"# mean block length {stats.mean_block_length!r} "
        f"vs exact {stats.exact_mean_block_length!r} "
        f"(stderr {stats.stderr_block_length!r})",
        file=sys.stderr,
    )
    return 0


def _apply_config(argv: list[str]) -> list[str]:
    """Expand ``--config FILE`` of flat key=value lines into flags."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        path = argv[idx + 1]
    except IndexError:
        return argv  # argparse will report the missing value
    expanded = argv[:idx] + argv[idx + 2 :]
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            flag = "--" + key.strip().replace("_", "-")
            expanded.extend([flag, value.strip()])
    return expanded


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sawbridge",
        description="Exact enumeration, structure, surgery and sampling "
        "for self-avoiding walks and bridges on Z^d.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--d", type=int, default=2, help="lattice dimension (default 2)")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("count", help="exact counts table with summary estimates")
    common(p)
    p.add_argument("--max-n", type=_positive_int, required=True)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("analyze", help="structure report for one walk")
    common(p)
    p.add_argument("--walk", required=True, help="step string, e.g. '+2,+1,+2'")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("surgery", help="apply one surgery and trace it")
    common(p)
    p.add_argument("--walk", required=True)
    p.add_argument("--op", choices=("unfold", "stickbreak"), required=True)
    p.add_argument("--params", required=True, help="'i,j' site indices")
    p.set_defaults(func=_cmd_surgery)

    p = sub.add_parser("verify", help="run the exhaustive lemma suite")
    common(p)
    p.add_argument("--max-n", type=_positive_int, required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sample", help="Monte Carlo statistics or experiments")
    common(p)
    p.add_argument("--L", type=_positive_int, required=True, help="truncation length")
    p.add_argument("--mu-hat", type=float, default=None)
    p.add_argument(
        "--table-n",
        type=_positive_int,
        default=10,
        help="counts-table length used when --mu-hat is not given",
    )
    p.add_argument("--blocks", type=_positive_int, default=10)
    p.add_argument("--samples", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--experiment", choices=("stats", "stickbreak"), default="stats")
    p.add_argument(
        "--windows",
        type=float,
        nargs=4,
        default=(0.1, 0.2, 0.3, 0.4),
        metavar=("F1", "F2", "F3", "F4"),
        help="diamond ordinal windows as fractions of the diamond count",
    )
    p.set_defaults(func=_cmd_sample)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    argv = _apply_config(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (WalkError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

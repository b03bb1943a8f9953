"""Standalone CLI: `crosseval eval` for one run, `crosseval matrix` for a grid.

Exit codes: 0 success, 2 input error (missing file, schema mismatch,
degenerate training labels). Matrix runs never abort on a single failed
row; failures are marked in the table.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .data import DataError
from .harness import EvalConfig, format_matrix_table, run_eval, run_matrix, write_artifacts
from .models import MODEL_KINDS


def _cmd_eval(args: argparse.Namespace) -> int:
    cfg = EvalConfig(
        train_path=args.train, test_path=args.test, model_kind=args.model, seed=args.seed
    )
    try:
        result = run_eval(cfg)
    except (DataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    paths = write_artifacts(result, args.out_dir, tag=args.tag)
    print(
        f"{result.model_kind}: precision {result.precision:.4f}  recall {result.recall:.4f}  "
        f"f1 {result.f1:.4f}  accuracy {result.accuracy:.4f}  (macro averaging)"
    )
    for path in paths:
        print(f"  -> {path}")
    return 0


def _cmd_matrix(args: argparse.Namespace) -> int:
    kinds = [k.strip() for k in args.models.split(",") if k.strip()]
    for kind in kinds:
        if kind not in MODEL_KINDS:
            print(f"error: unknown model kind {kind!r}", file=sys.stderr)
            return 2
    cfgs = [
        EvalConfig(train_path=args.train, test_path=args.test, model_kind=kind, seed=args.seed)
        for kind in kinds
    ]
    rows = run_matrix(cfgs)
    table = format_matrix_table(rows)
    print(table)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "matrix.txt").write_text(table + "\n", "utf-8")
    for row in rows:
        if row.result is not None:
            write_artifacts(row.result, out_dir)
    failed = sum(1 for row in rows if row.error is not None)
    if failed:
        print(f"{failed} of {len(rows)} evaluations failed", file=sys.stderr)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crosseval",
        description="Train a classifier on one labeled CSV and evaluate it on another",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="single train/test evaluation")
    p.add_argument("--train", required=True, help="training CSV (e.g. synthetic data)")
    p.add_argument("--test", required=True, help="evaluation CSV (e.g. real data)")
    p.add_argument("--model", choices=MODEL_KINDS, default="gbdt")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="reports")
    p.add_argument("--tag", default=None, help="artifact filename stem (default: model kind)")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("matrix", help="one row per model kind, aligned table output")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--models", default=",".join(MODEL_KINDS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="reports")
    p.set_defaults(func=_cmd_matrix)

    return parser


def main() -> None:
    args = _build_parser().parse_args()
    sys.exit(args.func(args))


if __name__ == "__main__":
    main()

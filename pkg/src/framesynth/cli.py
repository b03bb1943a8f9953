"""Command-line front end: generate, check, compare, pca, lint.

Exit codes partition failures disjointly: 0 success, 2 input error (bad
ruleset/CSV/arguments), 3 infeasible generation, 4 validation failure,
5 lint failure. All randomness is driven by explicit --seed flags; there
is deliberately no environment-variable fallback.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import fidelity, generator
from .ruleset import Ruleset, RulesetError, lint_ruleset, parse_ruleset, scaled_ruleset
from .sampling import Prng
from .schema import CsvFormatError, Dataset, decode_csv, encode_csv

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_VALIDATION = 4
EXIT_LINT = 5


@dataclass
class CommandOutcome:
    exit_code: int
    report_paths: list[str] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


def _fail(code: int, message: str) -> CommandOutcome:
    print(f"error: {message}", file=sys.stderr)
    return CommandOutcome(exit_code=code, diagnostics=[message])


def _load_ruleset(path: str) -> Ruleset:
    return parse_ruleset(Path(path).read_text("utf-8"))


def _load_dataset(path: str) -> Dataset:
    with open(path, "rb") as fh:
        return decode_csv(fh)


def _cmd_generate(args: argparse.Namespace) -> CommandOutcome:
    try:
        rs = _load_ruleset(args.ruleset)
    except (OSError, RulesetError) as exc:
        return _fail(EXIT_INPUT, f"ruleset: {exc}")
    diags = lint_ruleset(rs)
    if diags:
        for d in diags:
            print(f"lint: {d}", file=sys.stderr)
        return _fail(EXIT_INPUT, f"ruleset failed lint with {len(diags)} diagnostic(s)")

    rows = args.rows if args.rows is not None else rs.total_rows()
    if rows != rs.total_rows():
        if not args.scale:
            return _fail(
                EXIT_INPUT,
                f"--rows {rows} does not match the ruleset's label counts "
                f"({rs.total_rows()}); pass --scale to rescale proportionally",
            )
        rs = scaled_ruleset(rs, rows)

    cfg = generator.GenerationConfig(ruleset=rs, total_rows=rows, seed=args.seed)
    try:
        ds, stats = generator.generate(cfg)
    except generator.InfeasibleRulesetError as exc:
        return _fail(EXIT_INFEASIBLE, str(exc))
    except ValueError as exc:
        return _fail(EXIT_INPUT, str(exc))
    if args.shuffle:
        ds = generator.shuffle_dataset(ds, Prng(args.seed).derive("shuffle"))

    out_path = Path(args.out)
    try:
        with open(out_path, "wb") as fh:
            encode_csv(ds, fh)
        stats_path = (
            Path(args.stats) if args.stats else out_path.with_suffix(out_path.suffix + ".stats.json")
        )
        stats_doc = {"seed": args.seed, "ruleset": str(args.ruleset), **stats.to_dict()}
        stats_path.write_text(json.dumps(stats_doc, indent=2) + "\n", "utf-8")
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot write output: {exc}")

    for label in sorted(stats.rows_by_label):
        name = rs.class_names.get(label, str(label))
        print(f"label {label} ({name}): {stats.rows_by_label[label]} rows")
    print(f"total: {stats.total_rows} rows in {stats.total_attempts} attempts -> {out_path}")
    outcome = CommandOutcome(exit_code=EXIT_OK, report_paths=[str(out_path), str(stats_path)])
    for s in stats.quota_shortfalls:
        msg = (
            f"quota shortfall: {s.flag}/{s.stage} label {s.label}: "
            f"achieved {s.achieved_count} of {s.target_count}"
        )
        print(msg)
        outcome.diagnostics.append(msg)
    return outcome


def _cmd_check(args: argparse.Namespace) -> CommandOutcome:
    try:
        rs = _load_ruleset(args.ruleset)
    except (OSError, RulesetError) as exc:
        return _fail(EXIT_INPUT, f"ruleset: {exc}")
    try:
        ds = _load_dataset(args.csv)
    except (OSError, CsvFormatError) as exc:
        return _fail(EXIT_INPUT, f"csv: {exc}")

    histogram = {rule: 0 for rule in generator.CHECK_RULE_IDS}
    bad_rows = 0
    for r in ds.rows:
        report = generator.check(rs, r)
        if not report.valid:
            bad_rows += 1
            for rule_id, _ in report.violations:
                histogram[rule_id] += 1

    if not ds.rows:
        print("0 rows checked (header-only file)")
        return CommandOutcome(exit_code=EXIT_OK)
    print(f"{len(ds.rows)} rows checked, {bad_rows} invalid")
    for rule_id in generator.CHECK_RULE_IDS:
        print(f"  {rule_id}: {histogram[rule_id]}")
    if bad_rows:
        return CommandOutcome(
            exit_code=EXIT_VALIDATION,
            diagnostics=[f"{bad_rows} rows violate the hard rules"],
        )
    return CommandOutcome(exit_code=EXIT_OK)


def _load_pair(args: argparse.Namespace) -> tuple[Dataset, Dataset]:
    with open(args.real, "rb") as fh:
        real = decode_csv(fh)
    with open(args.synthetic, "rb") as fh:
        synthetic = decode_csv(fh)
    return real, synthetic


def _cmd_compare(args: argparse.Namespace) -> CommandOutcome:
    try:
        real, synthetic = _load_pair(args)
    except (OSError, CsvFormatError) as exc:
        return _fail(EXIT_INPUT, f"csv: {exc}")
    sample_size = args.sample_size or min(len(real.rows), len(synthetic.rows), 10_000)
    try:
        report = fidelity.build_fidelity_report(
            real, synthetic, sample_size=sample_size, seed=args.seed, top_k=args.top_k
        )
    except ValueError as exc:
        return _fail(EXIT_INPUT, str(exc))
    out_path = Path(args.out)
    out_path.write_text(report.to_json(), "utf-8")
    print(report.format_text())
    print(f"report -> {out_path}")
    return CommandOutcome(exit_code=EXIT_OK, report_paths=[str(out_path)])


def _cmd_pca(args: argparse.Namespace) -> CommandOutcome:
    try:
        real, synthetic = _load_pair(args)
    except (OSError, CsvFormatError) as exc:
        return _fail(EXIT_INPUT, f"csv: {exc}")
    sample_size = args.sample_size or min(len(real.rows), len(synthetic.rows), 5_000)
    try:
        projection = fidelity.pca_shared_projection(
            real, synthetic, k=args.components, sample_size=sample_size, seed=args.seed
        )
    except ValueError as exc:
        return _fail(EXIT_INPUT, str(exc))
    out_path = Path(args.out)
    out_path.write_text(projection.to_csv_text(), "utf-8")
    dropped = ", ".join(projection.model.dropped_features) or "none"
    variances = ", ".join(f"{v:.4f}" for v in projection.model.explained_variance)
    print(f"{len(projection.points)} projected points -> {out_path}")
    print(f"explained variance per component: {variances}")
    print(f"constant features dropped: {dropped}")
    return CommandOutcome(exit_code=EXIT_OK, report_paths=[str(out_path)])


def _cmd_lint(args: argparse.Namespace) -> CommandOutcome:
    try:
        rs = _load_ruleset(args.ruleset)
    except (OSError, RulesetError) as exc:
        return _fail(EXIT_INPUT, f"ruleset: {exc}")
    diags = lint_ruleset(rs)
    if not diags:
        print("ruleset is clean")
        return CommandOutcome(exit_code=EXIT_OK)
    for d in diags:
        print(d)
    return CommandOutcome(exit_code=EXIT_LINT, diagnostics=diags)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framesynth",
        description="Rule-strict synthetic Wi-Fi frame dataset generator and fidelity toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a rule-compliant CSV dataset")
    p.add_argument("ruleset", help="path to a ruleset JSON document")
    p.add_argument("--rows", type=int, default=None, help="total rows (default: ruleset counts)")
    p.add_argument("--seed", type=int, required=True, help="unsigned 64-bit generation seed")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--stats", default=None, help="stats sidecar path (default: OUT.stats.json)")
    p.add_argument("--scale", action="store_true", help="rescale label counts to --rows (largest remainder)")
    p.add_argument("--shuffle", action="store_true", help="seeded full shuffle of output row order")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("check", help="validate a CSV against a ruleset's hard rules")
    p.add_argument("ruleset")
    p.add_argument("csv")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("compare", help="fidelity report for a real/synthetic CSV pair")
    p.add_argument("real")
    p.add_argument("synthetic")
    p.add_argument("--sample-size", type=int, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--top-k", type=int, default=3)
    p.add_argument("--out", required=True, help="JSON report path")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("pca", help="shared PCA projection CSV for a real/synthetic pair")
    p.add_argument("real")
    p.add_argument("synthetic")
    p.add_argument("--components", type=int, default=2)
    p.add_argument("--sample-size", type=int, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="projection CSV path")
    p.set_defaults(func=_cmd_pca)

    p = sub.add_parser("lint", help="authoring-time ruleset diagnostics")
    p.add_argument("ruleset")
    p.set_defaults(func=_cmd_lint)

    return parser


def run(argv: list[str] | None = None) -> CommandOutcome:
    args = _build_parser().parse_args(argv)
    return args.func(args)


def main() -> None:
    sys.exit(run().exit_code)


if __name__ == "__main__":
    main()

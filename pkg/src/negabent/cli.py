"""Command-line entry point.

Exit codes: 0 success / verification pass, 1 usage or input error,
2 verification, oracle or batch-cell failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import statistics
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .boolfunc import (
    TruthTable,
    anf_degree,
    extend_odd,
    is_bent,
    is_bent_negabent,
    is_negabent_direct,
    is_negabent_reduced,
    nega_transform,
    nonlinearity,
    sigma2,
    wht,
)
from .engine import EaConfig, RunRecord, run, run_batch
from .fitness import EXTENDED, LITERAL
from .oracles import run_suites

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
CSV_HEADER = ("n", "encoding", "seed", "fitness", "normalized", "success", "evaluations", "wall_time_s")
ROUTINE_MAX_N = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_table(source: str) -> TruthTable:
    """Accept a hex string or a path to a file whose first token is one."""
    text = source
    path = Path(source)
    if path.is_file():
        tokens = path.read_text().split()
        if not tokens:
            raise ValueError(f"{source}: empty file")
        text = tokens[0]
    return TruthTable.from_hex(text)


def certify(tt: TruthTable) -> Optional[str]:
    """None if the table is certified, else the reason it is not.

    Even n: bent and directly negabent. Odd n: directly negabent with a bent
    extension. The sigma2 reduction is never used here.
    """
    if tt.n % 2 == 0:
        if not is_bent(tt):
            return "not bent"
    elif not is_bent(extend_odd(tt)):
        return "extension not bent"
    if not is_negabent_direct(tt):
        return "not negabent"
    return None


# --------------------------------------------------------------------------
# batch aggregation
# --------------------------------------------------------------------------

@dataclass
class BatchSummary:
    n: int
    encoding: str
    repetitions: int
    success_count: int
    best: float
    median: float
    worst: float
    normalized_best: float
    normalized_median: float
    normalized_worst: float
    normalized_mean: float
    rows: list[dict] = field(default_factory=list)

    @classmethod
    def from_rows(cls, rows: list[dict]) -> "BatchSummary":
        fit = [float(r["fitness"]) for r in rows]
        norm = [float(r["normalized"]) for r in rows]
        return cls(
            n=int(rows[0]["n"]),
            encoding=rows[0]["encoding"],
            repetitions=len(rows),
            success_count=sum(str(r["success"]).lower() == "true" for r in rows),
            best=max(fit),
            median=statistics.median(fit),
            worst=min(fit),
            normalized_best=max(norm),
            normalized_median=statistics.median(norm),
            normalized_worst=min(norm),
            normalized_mean=statistics.fmean(norm),
            rows=rows,
        )

    def line(self) -> str:
        return (
            f"{self.n:>3} {self.encoding:>3} {self.repetitions:>5} {self.success_count:>7} "
            f"{self.best:>10.4f} {self.median:>10.4f} {self.worst:>10.4f} "
            f"{self.normalized_median:>8.5f} {self.normalized_mean:>8.5f}"
        )


SUMMARY_HEADER = f"{'n':>3} {'enc':>3} {'reps':>5} {'success':>7} {'best':>10} {'median':>10} {'worst':>10} {'nmedian':>8} {'nmean':>8}"


def csv_row(rec: RunRecord, timing: bool = True) -> dict:
    return {
        "n": rec.config.n,
        "encoding": rec.config.encoding,
        "seed": rec.config.seed,
        "fitness": repr(float(rec.best_fitness)),
        "normalized": repr(rec.normalized),
        "success": "true" if rec.success else "false",
        "evaluations": rec.evaluations_used,
        "wall_time_s": f"{rec.wall_time:.6f}" if timing else "0",
    }


def write_csv(rows: Sequence[dict], handle) -> None:
    writer = csv.DictWriter(handle, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _config_from(args, n: int, encoding: str, seed: int = 0) -> EaConfig:
    return EaConfig(
        n=n,
        encoding=encoding,
        population_size=args.pop,
        p_mut=args.pmut,
        budget=args.budget,
        seed=seed,
        max_depth=args.max_depth,
        early_stop=not args.no_early_stop,
        odd_denominator=args.odd_denominator,
    )


def cmd_evolve(args, out=None) -> int:
    out = out or sys.stdout
    try:
        config = _config_from(args, args.n, args.encoding, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rec = run(config)
    text = rec.to_json(timing=not args.omit_timing)
    print(text, file=out)
    if args.out:
        Path(args.out).write_text(text + "\n")
    if rec.success:
        print(f"winner: {rec.best_truth_table}", file=out)
        if rec.best_expression:
            print(f"expression: {rec.best_expression}", file=out)
        reason = certify(rec.table())
        print(f"certification: {'PASS' if reason is None else 'FAIL (' + reason + ')'}", file=out)
        if reason is not None:
            return EXIT_FAIL
    return EXIT_OK


def _parse_n_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad --n-list {text!r}") from exc


def cmd_batch(args, out=None) -> int:
    out = out or sys.stdout
    sizes = _parse_n_list(args.n_list)
    large = [n for n in sizes if n > ROUTINE_MAX_N]
    if large and not args.allow_large:
        raise UsageError(f"sizes {large} exceed {ROUTINE_MAX_N}; pass --allow-large to run them")
    encodings = ["tt", "gp"] if args.encoding == "both" else [args.encoding]
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
    timing = not args.omit_timing

    rows: list[dict] = []
    records: list[RunRecord] = []
    summaries: list[BatchSummary] = []
    failed = []
    for encoding in encodings:
        for n in sizes:
            try:
                config = _config_from(args, n, encoding)
                cell = run_batch(config, args.reps, args.base_seed, jobs=jobs)
            except Exception as exc:  # one bad cell must not sink the batch
                failed.append(f"n={n} encoding={encoding}: {exc}")
                continue
            cell_rows = [csv_row(r, timing) for r in cell]
            for r in cell:
                if r.success and (reason := certify(r.table())) is not None:
                    failed.append(f"n={n} encoding={encoding} seed={r.config.seed}: winner {reason}")
            rows.extend(cell_rows)
            records.extend(cell)
            summaries.append(BatchSummary.from_rows(cell_rows))

    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            write_csv(rows, handle)
    if args.records:
        Path(args.records).write_text("".join(r.to_json(timing) + "\n" for r in records))
    print(SUMMARY_HEADER, file=out)
    for s in summaries:
        print(s.line(), file=out)
    for msg in failed:
        print(f"FAILED {msg}", file=out)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_analyze(args, out=None) -> int:
    out = out or sys.stdout
    try:
        tt = read_table(args.table)
    except ValueError as exc:
        print(f"error: {exc}", file=out)
        return EXIT_USAGE
    ws = wht(tt)
    print(f"n: {tt.n}", file=out)
    print(f"nonlinearity: {nonlinearity(ws)}", file=out)
    print(f"degree: {anf_degree(tt)}", file=out)
    print(f"bent: {str(is_bent(tt)).lower()}", file=out)
    print(f"negabent_reduced: {str(is_negabent_reduced(tt)).lower()}", file=out)
    print(f"negabent_direct: {str(is_negabent_direct(tt)).lower()}", file=out)
    if tt.n % 2 == 0:
        print(f"bent_negabent: {str(is_bent_negabent(tt)).lower()}", file=out)
    if args.spectra:
        ns = nega_transform(tt)
        print(f"walsh: {' '.join(str(int(v)) for v in ws.values)}", file=out)
        print(f"nega: {' '.join(f'{int(r)}{int(i):+d}i' for r, i in zip(ns.re, ns.im))}", file=out)
    return EXIT_OK


def cmd_verify(args, out=None) -> int:
    out = out or sys.stdout
    try:
        tt = read_table(args.table)
    except ValueError as exc:
        print(f"parse error: {exc}", file=out)
        return EXIT_USAGE
    reason = certify(tt)
    if reason is not None:
        print(reason, file=out)
        return EXIT_FAIL
    if tt.n % 2 == 0 and args.with_dual:
        dual = certify(tt ^ sigma2(tt.n))
        if dual is not None:
            print(f"f xor sigma2: {dual}", file=out)
            return EXIT_FAIL
    print("verified", file=out)
    return EXIT_OK


def cmd_oracle(args, out=None) -> int:
    out = out or sys.stdout
    if not 1 <= args.max_n <= 4:
        raise UsageError("--max-n must be in [1, 4]")
    results = run_suites(args.max_n)
    for r in results:
        print(r.line(), file=out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--pop", type=int, default=500)
    p.add_argument("--pmut", type=float, default=0.5)
    p.add_argument("--max-depth", type=int, default=8)
    p.add_argument("--no-early-stop", action="store_true", help="run the full budget")
    p.add_argument("--odd-denominator", choices=(EXTENDED, LITERAL), default=EXTENDED)
    p.add_argument("--omit-timing", action="store_true", help="zero wall-time fields for byte-stable output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="negabent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("evolve", help="run one seeded evolution")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--encoding", choices=("tt", "gp"), default="gp")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    _add_run_flags(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("batch", help="repeated runs per size with CSV output")
    p.add_argument("--n-list", required=True, help="e.g. 6,7,8")
    p.add_argument("--encoding", choices=("tt", "gp", "both"), default="gp")
    p.add_argument("--reps", type=int, default=30)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--csv")
    p.add_argument("--records", help="write one JSON run record per line")
    p.add_argument("--jobs", type=int, default=0, help="worker processes (default: all cores)")
    p.add_argument("--allow-large", action="store_true", help=f"permit n > {ROUTINE_MAX_N}")
    _add_run_flags(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("analyze", help="report spectral properties of a table")
    p.add_argument("table", help="hex truth table or file containing one")
    p.add_argument("--spectra", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="certify bent + negabent without the sigma2 reduction")
    p.add_argument("table", help="hex truth table or file containing one")
    p.add_argument("--with-dual", action="store_true", help="also certify f xor sigma2")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive brute-force property suites")
    p.add_argument("--max-n", type=int, default=4)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"negabent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

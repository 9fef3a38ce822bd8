"""Command-line interface.

Usage:
    pnsfi bounds table4_rates.csv                 # PN-FI / PS-FI / PNS-FI per feature
    pnsfi bounds counts.csv --confidence 0.95     # plus Wilson uncertainty envelopes
    pnsfi rank table4_rates.csv --by pns:mid --threshold 0.1
    pnsfi simulate config.json --format json

Exit codes: 0 success, 2 input error, 3 nothing computable.
Bundled fixtures can be named directly, e.g. ``pnsfi bounds table3_counts``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .inputs import InputError, bundled_path, load_features
from .ranking import DEFAULT_CRITERION, FeatureRecord, RankingCriterion, rank_features, select_features
from .reports import FORMATS, build_rows, render_bounds, render_ranking, render_simulation
from .study import ConfigError, SimulationConfig, run_study

__all__ = ["main", "cmd_bounds", "cmd_rank", "cmd_simulate", "EXIT_OK", "EXIT_INPUT", "EXIT_EMPTY"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_EMPTY = 3

log = logging.getLogger("pnsfi")


class CommandError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    try:
        return bundled_path(path)
    except FileNotFoundError:
        return p  # let the reader report the missing file


def _load(path: str):
    try:
        return load_features(_resolve(path))
    except InputError as exc:
        raise CommandError(str(exc)) from None


def _level(value: str) -> float:
    try:
        level = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if not 0.0 < level < 1.0:
        raise argparse.ArgumentTypeError(f"confidence level must lie in (0, 1), got {value}")
    return level


def _threshold(value: str) -> float:
    try:
        t = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if not 0.0 <= t <= 1.0:
        raise argparse.ArgumentTypeError(f"threshold must lie in [0, 1], got {value}")
    return t


def _criterion(value: str) -> RankingCriterion:
    try:
        return RankingCriterion.parse(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_bounds(path: str, fmt: str = "table", confidence: Optional[float] = None) -> str:
    features = _load(path)
    rows = build_rows(features, confidence)
    if all(not r.bounds.pn and not r.bounds.ps for r in rows):
        raise CommandError("PN and PS are undefined for every feature", EXIT_EMPTY)
    for r in rows:
        if "negative-effect" in r.flags:
            log.warning("feature %r: recognition is higher with the feature covered", r.feature)
    return render_bounds(rows, fmt)


def cmd_rank(
    path: str,
    criterion: RankingCriterion = DEFAULT_CRITERION,
    threshold: Optional[float] = None,
    fmt: str = "table",
) -> str:
    features = _load(path)
    records = [FeatureRecord.from_rates(f.name, f.rates, f.flags) for f in features]
    ranked = rank_features(records, criterion)
    if all(r.score is None for r in ranked):
        raise CommandError(f"no feature has a defined {criterion.target.upper()} score", EXIT_EMPTY)
    selected = select_features(records, criterion, threshold) if threshold is not None else None
    flags = {r.name: sorted(r.flags) for r in records}
    return render_ranking(ranked, criterion, fmt, threshold, selected, flags)


def cmd_simulate(path: str, fmt: str = "table", workers: Optional[int] = None) -> str:
    config_path = _resolve(path)
    try:
        data = json.loads(config_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CommandError(f"{config_path}: cannot read config: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CommandError(f"{config_path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    if workers is not None and isinstance(data, dict):
        data = {**data, "workers": workers}
    try:
        cfg = SimulationConfig.from_dict(data)
    except ConfigError as exc:
        raise CommandError(f"{config_path}: {exc}") from None
    summaries = run_study(cfg)
    meta = {
        "mode": cfg.mode,
        "population_size": cfg.population_size,
        "treated_fraction": cfg.treated_fraction,
        "fixed_arms": cfg.fixed_arms,
        "paired": cfg.paired,
        "replications": cfg.replications,
        "confidence": cfg.confidence,
        "seed": cfg.seed,
    }
    return render_simulation(summaries, fmt, meta)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pnsfi",
        description="Interval feature importance (PN-FI, PS-FI, PNS-FI) from RCT data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", "-f", choices=FORMATS, default="table")
        p.add_argument("--output", "-o", help="write the report here instead of stdout")

    p = sub.add_parser("bounds", help="PN/PS/PNS intervals per feature")
    p.add_argument("input", help="counts or rates table (CSV or JSON), or a bundled fixture name")
    p.add_argument("--confidence", type=_level, help="add Wilson uncertainty envelopes at this level")
    common(p)

    p = sub.add_parser("rank", help="rank features by a bound statistic")
    p.add_argument("input")
    p.add_argument("--by", type=_criterion, default=DEFAULT_CRITERION, metavar="TARGET:STAT",
                   help="pn|ps|pns : lower|mid|upper (default pns:lower)")
    p.add_argument("--threshold", type=_threshold, help="also print the features scoring at least this")
    common(p)

    p = sub.add_parser("simulate", help="check bounds against SCM ground truth")
    p.add_argument("config", help="JSON simulation config")
    p.add_argument("--workers", type=int, help="threads for replications (results do not depend on it)")
    common(p)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bounds":
            out = cmd_bounds(args.input, args.format, args.confidence)
        elif args.command == "rank":
            out = cmd_rank(args.input, args.by, args.threshold, args.format)
        else:
            out = cmd_simulate(args.config, args.format, args.workers)
    except CommandError as exc:
        print(f"pnsfi {args.command}: {exc}", file=sys.stderr)
        return exc.code
    if args.output:
        with open(args.output, "w", encoding="ascii", newline="\n") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

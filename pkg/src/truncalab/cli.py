"""Command-line interface: ``truncalab simulate | evaluate | plot``.

Exit status is 0 on success, 2 for bad flags or malformed input files and 1
when output cannot be written.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .ballots import truncate_profile
from .experiment import (RULE_NAMES, GridConfig, ResultsFormatError, emit_csv,
                         read_csv, run_grid)
from .fileformat import ProfileFileError, parse_profile_file
from .rules import LAST_PLACE_MODES, winning_set

log = logging.getLogger("truncalab")

DEFAULTS = GridConfig()


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"values must be positive: {text!r}")
    return values


def _phi_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if any(not 0.0 <= v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError(f"phi values must lie in [0, 1]: {text!r}")
    return values


def _rule_list(text: str) -> tuple[str, ...]:
    rules = tuple(r.strip() for r in text.split(",") if r.strip())
    unknown = [r for r in rules if r not in RULE_NAMES]
    if unknown or not rules:
        raise argparse.ArgumentTypeError(
            f"rules must be drawn from {','.join(RULE_NAMES)}; got {text!r}")
    if len(set(rules)) != len(rules):
        raise argparse.ArgumentTypeError(f"rule listed twice in {text!r}")
    return rules


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _workers(text: str) -> int:
    if text == "single":
        return 1
    return _positive(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="truncalab",
        description="Forced ballot truncation experiments for four winning-set rules.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the truncation sweep and write CSV")
    sim.add_argument("--candidates", type=_int_list, default=DEFAULTS.candidate_counts)
    sim.add_argument("--voters", type=_int_list, default=DEFAULTS.voter_counts)
    sim.add_argument("--phi", type=_phi_list, default=DEFAULTS.phis)
    sim.add_argument("--trials", type=_positive, default=DEFAULTS.trials)
    sim.add_argument("--seed", type=_seed, default=DEFAULTS.master_seed)
    sim.add_argument("--rules", type=_rule_list, default=DEFAULTS.rules)
    sim.add_argument("--out", type=Path, default=Path("results.csv"))
    sim.add_argument("--store-profiles", type=Path, metavar="PATH",
                     help="also write every sampled profile to PATH")
    sim.add_argument("--workers", type=_workers, default=None,
                     help="process count or 'single' (default: $TRUNCALAB_WORKERS or 1)")
    sim.add_argument("--coombs-last-place", choices=LAST_PLACE_MODES, default="full",
                     help="how truncated ballots cast Coombs last-place votes")
    sim.add_argument("--provenance", type=Path, metavar="PATH",
                     help="write seed, build and timestamp as JSON")
    sim.set_defaults(func=cmd_simulate)

    ev = sub.add_parser("evaluate", help="apply the rules to one ballot file")
    ev.add_argument("--profile", type=Path, required=True)
    ev.add_argument("--rules", type=_rule_list, default=RULE_NAMES)
    ev.add_argument("--truncate", type=_positive, metavar="L")
    ev.add_argument("--coombs-last-place", choices=LAST_PLACE_MODES, default="full")
    ev.set_defaults(func=cmd_evaluate)

    pl = sub.add_parser("plot", help="render SVG charts from a results CSV")
    pl.add_argument("--in", dest="input", type=Path, required=True)
    pl.add_argument("--out", type=Path, required=True)
    pl.add_argument("--group-by", choices=("all", "voters", "phi", "candidates"), default="all")
    pl.set_defaults(func=cmd_plot)
    return parser


def cmd_simulate(args: argparse.Namespace) -> int:
    workers = args.workers
    if workers is None:
        env = os.environ.get("TRUNCALAB_WORKERS", "1")
        try:
            workers = _workers(env)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"TRUNCALAB_WORKERS: {exc}")
    config = GridConfig(candidate_counts=args.candidates, voter_counts=args.voters,
                        phis=args.phi, trials=args.trials, master_seed=args.seed,
                        rules=args.rules, store_profiles=args.store_profiles is not None,
                        coombs_last_place=args.coombs_last_place)

    def progress(done: int, total: int, cell) -> None:
        m, n, phi = cell
        print(f"[{done}/{total}] candidates={m} voters={n} phi={phi:.2f}", file=sys.stderr)

    try:
        sink = open(args.store_profiles, "w", encoding="utf-8") if args.store_profiles else None
    except OSError as exc:
        log.error("cannot write %s: %s", args.store_profiles, exc)
        return 1
    try:
        table = run_grid(config, workers=workers, progress=progress, profile_sink=sink)
    finally:
        if sink is not None:
            sink.close()
    try:
        args.out.write_text(emit_csv(table), encoding="utf-8")
        if args.provenance:
            args.provenance.write_text(json.dumps(table.provenance(), indent=2) + "\n",
                                       encoding="utf-8")
    except OSError as exc:
        log.error("cannot write results: %s", exc)
        return 1
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    try:
        text = args.profile.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.profile}: {exc}")
    try:
        profile, names = parse_profile_file(text)
    except ProfileFileError as exc:
        raise UsageError(f"{args.profile}: {exc}")
    if args.truncate is not None:
        profile = truncate_profile(profile, args.truncate)
    for rule in args.rules:
        winners = sorted(names[c] for c in winning_set(rule, profile,
                                                      last_place=args.coombs_last_place))
        print(f"{rule}: {{{','.join(winners)}}}")
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    from .plotting import plot_results

    try:
        rows = read_csv(args.input.read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}")
    except ResultsFormatError as exc:
        raise UsageError(f"{args.input}: {exc}")
    try:
        paths = plot_results(rows, args.out, args.group_by)
    except OSError as exc:
        log.error("cannot write plots: %s", exc)
        return 1
    for path in paths:
        print(path)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"truncalab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

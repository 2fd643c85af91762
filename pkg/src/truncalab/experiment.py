"""Truncation-sweep experiment over a grid of (candidates, voters, phi) cells.

For each cell, ``trials`` Mallows profiles are drawn.  Each rule's winning set
on the complete profile is the reference; the profile is then truncated to
every ballot length ``L < m`` and a match is counted whenever the rule's
winning set is unchanged.

Trial ``t`` of cell ``c`` always draws from its own generator seeded with
``mix_seed(master_seed, c, t)``, so results do not depend on how cells are
spread across worker processes.
"""

from __future__ import annotations

import csv
import io
import logging
import os
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import metadata
from itertools import product
from math import factorial

import numpy as np

from . import engine
from .ballots import Profile, truncate_profile
from .mallows import check_seed, draw_electorate, make_rng, mix_seed
from .rules import LAST_PLACE_MODES, winning_set

log = logging.getLogger(__name__)

RULE_NAMES = ("bucklin", "coombs", "plurality_runoff", "schulze")
CSV_HEADER = ("candidates", "voters", "phi", "rule", "ballot_length",
              "trials", "matches", "probability")


@dataclass(frozen=True)
class GridConfig:
    candidate_counts: tuple[int, ...] = (4, 5, 6, 7)
    voter_counts: tuple[int, ...] = (100, 200, 300, 400, 500, 600, 2000)
    phis: tuple[float, ...] = (0.7, 0.8, 0.9, 1.0)
    trials: int = 1000
    master_seed: int = 42
    rules: tuple[str, ...] = RULE_NAMES
    store_profiles: bool = False
    coombs_last_place: str = "full"

    def __post_init__(self) -> None:
        for name in ("candidate_counts", "voter_counts", "phis", "rules"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.candidate_counts or any(m < 1 for m in self.candidate_counts):
            raise ValueError("candidate counts must be positive")
        if not self.voter_counts or any(n < 1 for n in self.voter_counts):
            raise ValueError("voter counts must be positive")
        if not self.phis or any(not 0.0 <= phi <= 1.0 for phi in self.phis):
            raise ValueError("phi values must lie in [0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        check_seed(self.master_seed)
        if not self.rules:
            raise ValueError("at least one rule is required")
        unknown = set(self.rules) - set(RULE_NAMES)
        if unknown:
            raise ValueError(f"unknown rules: {sorted(unknown)}")
        if len(set(self.rules)) != len(self.rules):
            raise ValueError("rules listed twice")
        if self.coombs_last_place not in LAST_PLACE_MODES:
            raise ValueError(f"coombs_last_place must be one of {LAST_PLACE_MODES}")

    def cells(self) -> list[tuple[int, int, float]]:
        """Grid cells in index order: candidates, then voters, then phi."""
        return list(product(self.candidate_counts, self.voter_counts, self.phis))


@dataclass(frozen=True)
class CellResult:
    m: int
    n: int
    phi: float
    rule: str
    ballot_length: int
    trials: int
    matches: int

    @property
    def probability(self) -> float:
        return self.matches / self.trials

    def sort_key(self):
        return (self.m, self.n, self.phi, self.rule, self.ballot_length)


@dataclass
class ResultTable:
    config: GridConfig
    rows: list[CellResult]
    master_seed: int
    build: str = field(default_factory=lambda: _build_id())
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def provenance(self) -> dict:
        return {"master_seed": self.master_seed, "build": self.build,
                "timestamp": self.timestamp, "config": asdict(self.config)}

    def lookup(self, m: int, n: int, phi: float, rule: str, L: int) -> CellResult:
        for row in self.rows:
            if row.sort_key() == (m, n, phi, rule, L):
                return row
        raise KeyError((m, n, phi, rule, L))


def _build_id() -> str:
    try:
        return f"truncalab {metadata.version('truncalab')}"
    except metadata.PackageNotFoundError:
        return "truncalab (source)"


def run_trial(m: int, n: int, phi: float, rules: Sequence[str], seed: int, *,
              profile: Profile | None = None,
              last_place: str = "full") -> dict[str, list[bool]]:
    """Match flags for one profile, indexed by ``L - 1`` for ``L = 1..m``.

    ``profile`` replaces the sampled electorate (it must be complete over
    ``m`` candidates); ``n``, ``phi`` and ``seed`` are then ignored.
    """
    if profile is None:
        _, orders = draw_electorate(m, n, phi, make_rng(seed))
        profile = Profile.from_orders(orders, m)
    elif profile.m != m or not profile.is_complete:
        raise ValueError("an injected profile must be complete over m candidates")
    flags = {}
    for rule in rules:
        truth = winning_set(rule, profile, last_place=last_place)
        row = [True] * m
        for L in range(m - 1, 0, -1):
            row[L - 1] = winning_set(rule, truncate_profile(profile, L),
                                     last_place=last_place) == truth
        flags[rule] = row
    return flags


def format_profile_record(m: int, n: int, phi: float, trial: int,
                          reference: Iterable[int], ballots: Iterable[tuple[Iterable[int], int]]) -> str:
    ref = ">".join(map(str, reference))
    body = ";".join(f"{'>'.join(map(str, r))}:{c}" for r, c in ballots)
    return f"{m},{n},{phi:.2f},{trial},{ref},{body}"


def _run_cell(args) -> tuple[int, dict[str, list[int]], list[str]]:
    cell_index, m, n, phi, trials, master_seed, rules, last_place, keep = args
    hist = np.zeros((trials, factorial(m)), dtype=np.int64)
    records = []
    orders_all = engine.all_orders(m)
    for t in range(trials):
        reference, orders = draw_electorate(m, n, phi, make_rng(mix_seed(master_seed, cell_index, t)))
        hist[t] = engine.histogram(orders, m)
        if keep:
            present = np.flatnonzero(hist[t])
            records.append(format_profile_record(
                m, n, phi, t, reference.tolist(),
                ((orders_all[i].tolist(), int(hist[t, i])) for i in present)))
    counts = engine.match_counts(hist, m, n, rules, last_place)
    return cell_index, counts, records


def default_workers() -> int:
    value = os.environ.get("TRUNCALAB_WORKERS", "1")
    return 1 if value == "single" else max(1, int(value))


def run_grid(config: GridConfig, workers: int = 1,
             progress: Callable[[int, int, tuple[int, int, float]], None] | None = None,
             profile_sink: io.TextIOBase | None = None) -> ResultTable:
    """Run every cell of ``config`` and collect match counts.

    With ``workers > 1`` cells are farmed out to a process pool; output is
    identical to the single-process run.  When ``config.store_profiles`` is
    set, one record per trial is written to ``profile_sink`` in cell order.
    """
    if config.store_profiles and profile_sink is None:
        raise ValueError("store_profiles needs a profile_sink to write to")
    cells = config.cells()
    jobs = [(i, m, n, phi, config.trials, config.master_seed, config.rules,
             config.coombs_last_place, config.store_profiles)
            for i, (m, n, phi) in enumerate(cells)]

    rows: list[CellResult] = []

    def collect(result) -> None:
        i, counts, records = result
        m, n, phi = cells[i]
        for rule, per_length in counts.items():
            for L, matches in enumerate(per_length, start=1):
                rows.append(CellResult(m, n, phi, rule, L, config.trials, matches))
        for line in records:
            profile_sink.write(line + "\n")
        if progress is not None:
            progress(i + 1, len(cells), cells[i])

    if workers <= 1:
        for job in jobs:
            collect(_run_cell(job))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map() yields in submission order, keeping the profile dump stable
            for result in pool.map(_run_cell, jobs):
                collect(result)

    rows.sort(key=CellResult.sort_key)
    return ResultTable(config, rows, config.master_seed)


def emit_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in sorted(table.rows, key=CellResult.sort_key):
        writer.writerow([row.m, row.n, f"{row.phi:.2f}", row.rule, row.ballot_length,
                         row.trials, row.matches, f"{row.probability:.4f}"])
    return buf.getvalue()


class ResultsFormatError(ValueError):
    pass


def read_csv(text: str) -> list[CellResult]:
    """Parse the CSV written by :func:`emit_csv`.

    Raises ResultsFormatError naming the first offending line.
    """
    lines = text.splitlines()
    if not lines or tuple(lines[0].strip().split(",")) != CSV_HEADER:
        raise ResultsFormatError(f"line 1: expected header {','.join(CSV_HEADER)}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.strip().split(",")
        try:
            if len(fields) != len(CSV_HEADER):
                raise ValueError(f"expected {len(CSV_HEADER)} fields, got {len(fields)}")
            m, n, phi, rule, L, trials, matches, prob = fields
            row = CellResult(int(m), int(n), float(phi), rule, int(L), int(trials), int(matches))
            float(prob)
            if rule not in RULE_NAMES:
                raise ValueError(f"unknown rule {rule!r}")
            if not (1 <= row.ballot_length <= row.m and 0 <= row.matches <= row.trials):
                raise ValueError("counts out of range")
        except ValueError as exc:
            raise ResultsFormatError(f"line {lineno}: {exc}") from None
        rows.append(row)
    if not rows:
        raise ResultsFormatError("no data rows")
    return rows

"""Probability-vs-ballot-length charts from sweep results."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .experiment import RULE_NAMES, CellResult  # noqa: E402

RULE_COLORS = {
    "coombs": "blue",
    "bucklin": "red",
    "plurality_runoff": "gold",
    "schulze": "green",
}
RULE_LABELS = {
    "bucklin": "Bucklin",
    "coombs": "Coombs",
    "plurality_runoff": "Plurality with runoff",
    "schulze": "Schulze",
}
GROUP_FIELDS = {"all": None, "voters": "n", "phi": "phi", "candidates": "m"}

STYLE = {
    "svg.hashsalt": "truncalab",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.figsize": (8, 5),
    "figure.dpi": 100,
}


def group_rows(rows: Iterable[CellResult], group_by: str) -> dict[str, list[CellResult]]:
    """Split rows into named groups, ordered by the grouping value."""
    if group_by not in GROUP_FIELDS:
        raise ValueError(f"group_by must be one of {sorted(GROUP_FIELDS)}")
    attr = GROUP_FIELDS[group_by]
    if attr is None:
        return {"all": list(rows)}
    buckets: dict[object, list[CellResult]] = defaultdict(list)
    for row in rows:
        buckets[getattr(row, attr)].append(row)
    fmt = "{:.2f}" if attr == "phi" else "{}"
    return {f"{group_by}_{fmt.format(key)}": buckets[key] for key in sorted(buckets)}


def mean_curves(rows: Iterable[CellResult]) -> dict[str, tuple[list[int], list[float]]]:
    """Per rule, the probability at each ballot length averaged over cells.

    Every (candidates, voters, phi) cell counts once, whatever its voter count.
    """
    acc: dict[str, dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    for row in rows:
        acc[row.rule][row.ballot_length].append(row.probability)
    curves = {}
    for rule in RULE_NAMES:
        if rule in acc:
            lengths = sorted(acc[rule])
            curves[rule] = (lengths, [sum(acc[rule][L]) / len(acc[rule][L]) for L in lengths])
    return curves


def _title(name: str) -> str:
    if name == "all":
        return "All simulations"
    field, value = name.split("_", 1)
    return {"voters": f"{value} voters", "phi": f"phi = {value}",
            "candidates": f"{value} candidates"}[field]


def plot_group(name: str, rows: list[CellResult], path: Path) -> Path:
    curves = mean_curves(rows)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for rule, (lengths, probs) in curves.items():
            ax.plot(lengths, probs, marker="o", color=RULE_COLORS[rule],
                    label=RULE_LABELS[rule], linewidth=1.5, markersize=4)
        max_len = max(row.ballot_length for row in rows)
        ax.set_xticks(range(1, max_len + 1))
        ax.set_xlim(0.8, max_len + 0.2)
        ax.set_ylim(0.0, 1.02)
        ax.set_xlabel("Ballot length L (candidates ranked)")
        ax.set_ylabel("Probability true winning set is chosen")
        ax.set_title(f"True winning set chosen vs. ballot length: {_title(name)}")
        ax.legend(loc="lower right", frameon=False)
        fig.text(0.01, 0.01, "Each (candidates, voters, phi) cell weighted equally",
                 fontsize=7, color="0.4")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path


def plot_results(rows: list[CellResult], out_dir: Path, group_by: str = "all") -> list[Path]:
    """Write one SVG per group into ``out_dir``; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [plot_group(name, group, out_dir / f"{name}.svg")
            for name, group in group_rows(rows, group_by).items()]

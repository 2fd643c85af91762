"""Mallows-phi electorates sampled by repeated insertion.

A ranking ``r`` is drawn with probability proportional to
``phi ** kendall_tau(r, reference)``.  ``phi = 0`` always yields the
reference; ``phi = 1`` is uniform over all ``m!`` orders.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .ballots import Profile, Ranking

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class MallowsParams:
    reference: Ranking
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.phi <= 1.0:
            raise ValueError(f"phi must lie in [0, 1], got {self.phi}")
        if not self.reference.is_complete:
            raise ValueError("the reference ranking must be complete")


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def splitmix64(x: int) -> int:
    """One SplitMix64 step (Steele, Lea & Flood 2014) on a 64-bit state."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def mix_seed(master_seed: int, cell_index: int, trial_index: int) -> int:
    """Derive an independent 64-bit trial seed from ``(master, cell, trial)``."""
    h = splitmix64(check_seed(master_seed))
    h = splitmix64(h ^ (cell_index & MASK64))
    return splitmix64(h ^ (trial_index & MASK64))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(check_seed(seed)))


def insertion_probabilities(i: int, phi: float) -> np.ndarray:
    """Probabilities of inserting the ``i``-th reference item at each slot.

    Entry ``j - 1`` is the chance of landing at position ``j`` from the top
    of the partial list (``j = 1..i``).  Landing at the bottom (``j = i``)
    keeps agreement with the reference and has weight ``phi ** 0``; each slot
    higher adds one inversion.
    """
    if i < 1:
        raise ValueError("insertion step starts at 1")
    weights = float(phi) ** np.arange(i - 1, -1, -1, dtype=float)
    return weights / weights.sum()


def sample_orders(reference: Sequence[int], phi: float, n: int,
                  rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` complete rankings; returns an ``(n, m)`` array, best first."""
    reference = np.asarray(reference, dtype=np.int64)
    m = len(reference)
    u = rng.random((n, m))
    # pos[:, t] is the current 0-based slot of reference item t
    pos = np.zeros((n, m), dtype=np.int64)
    for i in range(2, m + 1):
        cdf = np.cumsum(insertion_probabilities(i, phi))
        slot = np.minimum(np.searchsorted(cdf, u[:, i - 1], side="right"), i - 1)
        placed = pos[:, : i - 1]
        placed += placed >= slot[:, None]
        pos[:, i - 1] = slot
    orders = np.empty((n, m), dtype=np.int64)
    np.put_along_axis(orders, pos, np.broadcast_to(reference, (n, m)), axis=1)
    return orders


def sample_ranking_rim(params: MallowsParams, rng: np.random.Generator) -> Ranking:
    order = sample_orders(params.reference.ordered, params.phi, 1, rng)[0]
    return Ranking(tuple(order), params.reference.m)


def draw_electorate(m: int, n: int, phi: float,
                    rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Random reference ranking followed by ``n`` Mallows draws around it."""
    if m < 1 or n < 1:
        raise ValueError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    if not 0.0 <= phi <= 1.0:
        raise ValueError(f"phi must lie in [0, 1], got {phi}")
    reference = rng.permutation(m)
    return reference, sample_orders(reference, phi, n, rng)


def sample_profile(m: int, n: int, phi: float,
                   rng: np.random.Generator) -> tuple[Profile, MallowsParams]:
    reference, orders = draw_electorate(m, n, phi, rng)
    params = MallowsParams(Ranking(tuple(reference), m), float(phi))
    return Profile.from_orders(orders, m), params

"""Winning-set voting rules that accept truncated ballots.

Every rule returns a nonempty ``frozenset`` of candidate indices.  Majority
thresholds are strict and always measured against all ``n`` voters, including
ballots that rank none of the candidates still in contention.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from math import lcm

import numpy as np

from .ballots import Profile, support_matrix

WinningSet = frozenset

LAST_PLACE_MODES = ("full", "fractional", "ranked_only")


def _mask(m: int, remaining: Iterable[int] | None) -> np.ndarray:
    mask = np.zeros(m, dtype=bool)
    if remaining is None:
        mask[:] = True
    else:
        for c in remaining:
            if not 0 <= c < m:
                raise ValueError(f"candidate {c} outside range [0, {m})")
            mask[c] = True
    if not mask.any():
        raise ValueError("the remaining candidate set is empty")
    return mask


def _winners(mask: np.ndarray) -> frozenset[int]:
    return frozenset(int(c) for c in np.flatnonzero(mask))


def first_place_matrix(ranks: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """One-hot ``(k, m)`` matrix of each ballot's best candidate within ``mask``.

    Rows of ballots ranking no masked candidate are all zero.
    """
    m = ranks.shape[1]
    masked = np.where(mask, ranks, m)
    best = masked.min(axis=1, keepdims=True)
    return ((masked == best) & (best < m)).astype(np.int64)


def first_place_tally(p: Profile, remaining: Iterable[int] | None = None) -> np.ndarray:
    """Votes for each ballot's highest-ranked remaining candidate.

    Ballots that rank no remaining candidate abstain.
    """
    return p.counts @ first_place_matrix(p.ranks, _mask(p.m, remaining))


def last_place_matrix(ranks: np.ndarray, mask: np.ndarray,
                      mode: str = "full") -> tuple[np.ndarray, int]:
    """Per-ballot last-place weights among ``mask``, scaled to integers.

    Returns the ``(k, m)`` weight matrix and the scale it was multiplied by
    (``lcm(1..m)`` for the fractional mode, otherwise 1).
    """
    if mode not in LAST_PLACE_MODES:
        raise ValueError(f"unknown last-place mode {mode!r}; pick one of {LAST_PLACE_MODES}")
    m = ranks.shape[1]
    unranked = (ranks >= m) & mask
    missing = unranked.sum(axis=1, keepdims=True)
    ranked_rem = np.where(mask & (ranks < m), ranks, -1)
    lowest = ranked_rem.max(axis=1, keepdims=True)
    lowest_onehot = (ranked_rem == lowest) & (lowest >= 0)

    if mode == "ranked_only":
        return lowest_onehot.astype(np.int64), 1
    if mode == "full":
        return np.where(missing > 0, unranked, lowest_onehot).astype(np.int64), 1
    scale = lcm(*range(1, m + 1))
    share = scale // np.maximum(missing, 1)
    return np.where(missing > 0, unranked * share, lowest_onehot * scale).astype(np.int64), scale


def last_place_tally(p: Profile, remaining: Iterable[int] | None = None,
                     mode: str = "full") -> np.ndarray:
    """Last-place votes among ``remaining``.

    A ballot ranking every remaining candidate gives its vote to the lowest
    of them.  Otherwise, under the default ``"full"`` mode, each remaining
    candidate the ballot leaves unranked receives a whole vote.  The
    ``"fractional"`` mode splits one vote evenly among those candidates, and
    ``"ranked_only"`` gives it to the lowest remaining candidate the ballot
    does rank (abstaining if it ranks none).
    """
    weights, scale = last_place_matrix(p.ranks, _mask(p.m, remaining), mode)
    tally = p.counts @ weights
    return tally if scale == 1 else tally / scale


def runoff_pairs(first: np.ndarray) -> np.ndarray:
    """Symmetric ``(m, m)`` mask of the head-to-head runoffs to hold.

    A unique first-place leader meets every candidate tied for the second
    highest count; tied leaders meet each other.
    """
    m = len(first)
    lead = first == first.max()
    if lead.sum() == 1 and m > 1:
        rest = np.where(lead, -1, first)
        other = rest == rest.max()
    else:
        other = lead
    pairs = (lead[:, None] & other[None, :]) | (other[:, None] & lead[None, :])
    np.fill_diagonal(pairs, False)
    return pairs


def plurality_with_runoff(p: Profile) -> frozenset[int]:
    """Top-two runoff where ties for a finalist slot advance every tied candidate.

    A candidate ranked first by a strict majority wins outright.  Otherwise
    each runoff pair from :func:`runoff_pairs` is decided by how many ballots
    rank one above the other (an unranked candidate counts as ranked last);
    the winning set collects the winners of every pair, both sides of a tied
    pair included.
    """
    first = first_place_tally(p)
    if 2 * first.max() > p.n:
        return _winners(first == first.max())
    support = support_matrix(p)
    pairs = runoff_pairs(first)
    holds = pairs & (support >= support.T)
    return _winners(holds.any(axis=1))


def bucklin_scores(p: Profile, k: int) -> np.ndarray:
    """Voters ranking each candidate within their top ``k`` positions."""
    return p.counts @ (p.ranks < k).astype(np.int64)


def bucklin_adapted(p: Profile) -> frozenset[int]:
    """Bucklin that falls back to the highest full-ballot score.

    Levels are added one at a time until some candidate's cumulative score
    passes ``n / 2``; the highest scorers at that level win.  If no level
    ever yields a majority, the candidates with the highest score after all
    levels win.
    """
    n = p.n
    for k in range(1, p.m + 1):
        scores = bucklin_scores(p, k)
        if 2 * scores.max() > n:
            break
    return _winners(scores == scores.max())


def coombs_adapted(p: Profile, last_place: str = "full") -> frozenset[int]:
    """Coombs elimination whose winners are the last candidates standing.

    Each round first checks for a strict first-place majority among the
    remaining candidates.  Failing that, every candidate tied for the most
    last-place votes is eliminated together; if that would eliminate all the
    remaining candidates, they form the winning set instead.
    """
    n = p.n
    remaining = np.ones(p.m, dtype=bool)
    while True:
        first = first_place_tally(p, np.flatnonzero(remaining))
        if 2 * first.max() > n:
            return _winners(first == first.max())
        if remaining.sum() == 1:
            return _winners(remaining)
        weights, _ = last_place_matrix(p.ranks, remaining, last_place)
        last = p.counts @ weights
        worst = remaining & (last == last[remaining].max())
        if (worst == remaining).all():
            return _winners(remaining)
        remaining &= ~worst


def strongest_paths(margins: np.ndarray) -> np.ndarray:
    """Widest-path strengths over the complete margin digraph.

    ``P[a, b]`` is the best, over all paths from ``a`` to ``b``, of the
    weakest margin on the path.  Diagonal entries are meaningless.
    """
    paths = np.array(margins, dtype=np.int64, copy=True)
    for k in range(len(paths)):
        paths = np.maximum(paths, np.minimum(paths[:, k, None], paths[None, k, :]))
    return paths


def schulze_beat_path(p: Profile) -> frozenset[int]:
    support = support_matrix(p)
    paths = strongest_paths(support - support.T)
    beats_or_ties = paths >= paths.T
    np.fill_diagonal(beats_or_ties, True)
    return _winners(beats_or_ties.all(axis=1))


def condorcet_winner(p: Profile) -> int | None:
    support = support_matrix(p)
    wins = support > support.T
    for c in range(p.m):
        if wins[c].sum() == p.m - 1:
            return c
    return None


RULES: dict[str, Callable[[Profile], frozenset[int]]] = {
    "bucklin": bucklin_adapted,
    "coombs": coombs_adapted,
    "plurality_runoff": plurality_with_runoff,
    "schulze": schulze_beat_path,
}


def winning_set(rule: str, p: Profile, *, last_place: str = "full") -> frozenset[int]:
    if rule == "coombs":
        return coombs_adapted(p, last_place)
    try:
        return RULES[rule](p)
    except KeyError:
        raise ValueError(f"unknown rule {rule!r}; pick from {sorted(RULES)}") from None

"""Vectorised evaluation of many same-shaped elections at once.

A complete profile over ``m`` candidates is summarised by its histogram over
the ``m!`` orders, listed lexicographically.  Truncating to length ``L``
merges consecutive blocks of ``(m - L)!`` orders that share a prefix, so a
batch of ``T`` profiles at every ballot length is just a reshape-and-sum of
one ``(T, m!)`` array.  Each rule is then a few matrix products against
per-``(m, L)`` prefix tables, giving the same winning sets as
:mod:`truncalab.rules` applied profile by profile.
"""

from __future__ import annotations

from collections.abc import Iterator
from functools import lru_cache
from itertools import permutations
from math import factorial

import numpy as np

from .rules import first_place_matrix, last_place_matrix


@lru_cache(maxsize=None)
def all_orders(m: int) -> np.ndarray:
    """All ``m!`` orders of ``range(m)`` in lexicographic order."""
    orders = np.array(list(permutations(range(m))), dtype=np.int64)
    orders.flags.writeable = False
    return orders


def order_index(orders: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each row of an ``(n, m)`` array of permutations."""
    orders = np.asarray(orders)
    n, m = orders.shape
    index = np.zeros(n, dtype=np.int64)
    for i in range(m - 1):
        smaller_later = (orders[:, i + 1:] < orders[:, i, None]).sum(axis=1)
        index += smaller_later * factorial(m - 1 - i)
    return index


def histogram(orders: np.ndarray, m: int) -> np.ndarray:
    return np.bincount(order_index(orders), minlength=factorial(m))


def truncated(hist: np.ndarray, m: int, L: int) -> np.ndarray:
    """Collapse ``(T, m!)`` histograms onto ballots of length ``L``."""
    T = hist.shape[0]
    return hist.reshape(T, -1, factorial(m - L)).sum(axis=2)


class PrefixTables:
    """Per-prefix lookup matrices for ballots of length ``L`` over ``m``."""

    def __init__(self, m: int, L: int):
        self.m = m
        self.L = L
        prefixes = all_orders(m)[:: factorial(m - L), :L]
        ranks = np.full((len(prefixes), m), m, dtype=np.int64)
        np.put_along_axis(ranks, prefixes, np.broadcast_to(np.arange(L), prefixes.shape), axis=1)
        self.prefixes = prefixes
        self.ranks = ranks
        beats = ranks[:, :, None] < ranks[:, None, :]
        self.support = beats.reshape(len(ranks), m * m).astype(float)
        self.within = [(ranks < k).astype(float) for k in range(1, L + 1)]
        self._top: dict[int, np.ndarray] = {}
        self._last: dict[tuple[int, str], np.ndarray] = {}

    def _mask(self, code: int) -> np.ndarray:
        return (int(code) >> np.arange(self.m)) & 1 == 1

    def top(self, code: int) -> np.ndarray:
        """First-place matrix restricted to the candidate bitmask ``code``."""
        code = int(code)
        if code not in self._top:
            self._top[code] = first_place_matrix(self.ranks, self._mask(code)).astype(float)
        return self._top[code]

    def last(self, code: int, mode: str) -> np.ndarray:
        key = (int(code), mode)
        if key not in self._last:
            weights, _ = last_place_matrix(self.ranks, self._mask(code), mode)
            self._last[key] = weights.astype(float)
        return self._last[key]


@lru_cache(maxsize=None)
def prefix_tables(m: int, L: int) -> PrefixTables:
    return PrefixTables(m, L)


def _codes(masks: np.ndarray) -> np.ndarray:
    return masks.astype(np.int64) @ (1 << np.arange(masks.shape[1]))


def _groups(masks: np.ndarray) -> Iterator[tuple[int, np.ndarray]]:
    codes = _codes(masks)
    for code in np.unique(codes):
        yield int(code), np.flatnonzero(codes == code)


def _rows(hist: np.ndarray, rows: np.ndarray) -> np.ndarray:
    if len(rows) == len(hist):
        return hist
    return hist[rows]


def bucklin(hist: np.ndarray, tab: PrefixTables, n: int) -> np.ndarray:
    T = len(hist)
    result = np.zeros((T, tab.m), dtype=bool)
    decided = np.zeros(T, dtype=bool)
    for within in tab.within:
        scores = hist @ within
        best = scores.max(axis=1)
        hit = ~decided & (2 * best > n)
        result[hit] = scores[hit] == best[hit, None]
        decided |= hit
        if decided.all():
            return result
    # ballots carry no information past position L, so score_L == score_m
    rest = ~decided
    result[rest] = scores[rest] == best[rest, None]
    return result


def plurality_runoff(hist: np.ndarray, tab: PrefixTables, n: int) -> np.ndarray:
    m = tab.m
    first = hist @ tab.top((1 << m) - 1)
    top = first.max(axis=1, keepdims=True)
    lead = first == top
    rest = np.where(lead, -1.0, first)
    unique_lead = lead.sum(axis=1, keepdims=True) == 1
    other = np.where(unique_lead, rest == rest.max(axis=1, keepdims=True), lead)
    pairs = (lead[:, :, None] & other[:, None, :]) | (other[:, :, None] & lead[:, None, :])
    pairs[:, np.arange(m), np.arange(m)] = False

    support = (hist @ tab.support).reshape(-1, m, m)
    runoff = (pairs & (support >= support.transpose(0, 2, 1))).any(axis=2)
    majority = 2 * top > n
    return np.where(majority, lead, runoff)


def coombs(hist: np.ndarray, tab: PrefixTables, n: int, mode: str = "full") -> np.ndarray:
    T, m = len(hist), tab.m
    remaining = np.ones((T, m), dtype=bool)
    result = np.zeros((T, m), dtype=bool)
    active = np.arange(T)
    while active.size:
        rem = remaining[active]
        first = np.empty(rem.shape)
        last = np.empty(rem.shape)
        for code, idx in _groups(rem):
            block = _rows(hist, active[idx])
            first[idx] = block @ tab.top(code)
            last[idx] = block @ tab.last(code, mode)

        top = first.max(axis=1)
        done = 2 * top > n
        result[active[done]] = first[done] == top[done, None]

        lone = ~done & (rem.sum(axis=1) == 1)
        result[active[lone]] = rem[lone]
        done |= lone

        worst_score = np.where(rem, last, -np.inf).max(axis=1)
        worst = rem & (last == worst_score[:, None])
        stalled = ~done & (worst == rem).all(axis=1)
        result[active[stalled]] = rem[stalled]
        done |= stalled

        keep = ~done
        remaining[active[keep]] = rem[keep] & ~worst[keep]
        active = active[keep]
    return result


def schulze(hist: np.ndarray, tab: PrefixTables, n: int) -> np.ndarray:
    m = tab.m
    support = (hist @ tab.support).reshape(-1, m, m)
    paths = support - support.transpose(0, 2, 1)
    for k in range(m):
        paths = np.maximum(paths, np.minimum(paths[:, :, k, None], paths[:, None, k, :]))
    ok = paths >= paths.transpose(0, 2, 1)
    ok[:, np.arange(m), np.arange(m)] = True
    return ok.all(axis=2)


def winner_masks(rule: str, hist: np.ndarray, tab: PrefixTables, n: int,
                 last_place: str = "full") -> np.ndarray:
    """``(T, m)`` boolean winning-set masks for a batch of histograms."""
    if rule == "bucklin":
        return bucklin(hist, tab, n)
    if rule == "coombs":
        return coombs(hist, tab, n, last_place)
    if rule == "plurality_runoff":
        return plurality_runoff(hist, tab, n)
    if rule == "schulze":
        return schulze(hist, tab, n)
    raise ValueError(f"unknown rule {rule!r}")


def match_counts(hist: np.ndarray, m: int, n: int, rules: tuple[str, ...],
                 last_place: str = "full") -> dict[str, list[int]]:
    """Per rule, how many of the ``T`` profiles keep their true winning set at
    each ballot length ``L = 1..m`` (index ``L - 1``)."""
    hist = np.asarray(hist, dtype=float)
    T = len(hist)
    full = prefix_tables(m, m)
    truth = {r: winner_masks(r, hist, full, n, last_place) for r in rules}
    counts = {r: [0] * (m - 1) + [T] for r in rules}
    for L in range(1, m):
        tab = prefix_tables(m, L)
        short = truncated(hist, m, L)
        for r in rules:
            same = (winner_masks(r, short, tab, n, last_place) == truth[r]).all(axis=1)
            counts[r][L - 1] = int(same.sum())
    return counts

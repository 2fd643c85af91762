"""Strict, possibly truncated rankings and the profiles built from them.

Candidates are dense integer indices ``0..m-1``.  A ranking lists a prefix of
a voter's order; every candidate it omits sits below all listed candidates,
and two omitted candidates are incomparable.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class BallotError(ValueError):
    """Base class for invalid rankings and profiles."""


class NoCandidatesError(BallotError):
    pass


class EmptyRankingError(BallotError):
    pass


class DuplicateCandidateError(BallotError):
    pass


class CandidateOutOfRangeError(BallotError):
    pass


class IncompleteRankingError(BallotError):
    pass


@dataclass(frozen=True)
class Ranking:
    """One voter's ordering, most preferred first."""

    ordered: tuple[int, ...]
    m: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "ordered", tuple(int(c) for c in self.ordered))
        if self.m < 1:
            raise NoCandidatesError(f"candidate count must be positive, got {self.m}")
        if not self.ordered:
            raise EmptyRankingError("a ranking must list at least one candidate")
        for c in self.ordered:
            if not 0 <= c < self.m:
                raise CandidateOutOfRangeError(
                    f"candidate {c} outside range [0, {self.m})"
                )
        if len(set(self.ordered)) != len(self.ordered):
            raise DuplicateCandidateError(f"duplicate candidate in {self.ordered}")

    def __len__(self) -> int:
        return len(self.ordered)

    def __str__(self) -> str:
        return ">".join(map(str, self.ordered))

    @property
    def is_complete(self) -> bool:
        return len(self.ordered) == self.m

    def position(self, candidate: int) -> int | None:
        """0-based position of ``candidate``, or None when unranked."""
        try:
            return self.ordered.index(candidate)
        except ValueError:
            return None


def make_ranking(ordered: Sequence[int], m: int) -> Ranking:
    return Ranking(tuple(ordered), m)


class Profile:
    """An immutable multiset of rankings over ``m`` candidates.

    Identical rankings are grouped with a multiplicity.  Alongside the
    ``(Ranking, count)`` view, the profile keeps two read-only arrays that
    the rules work on directly:

    ``ranks``  -- shape ``(k, m)``; position of each candidate on each
                  ballot class, ``m`` when the candidate is unranked.
    ``counts`` -- shape ``(k,)``; multiplicity of each ballot class.
    """

    def __init__(self, m: int, ballots: Iterable[tuple[Ranking | Sequence[int], int]]):
        if m < 1:
            raise NoCandidatesError(f"candidate count must be positive, got {m}")
        rows = []
        counts = []
        for ranking, count in ballots:
            if not isinstance(ranking, Ranking):
                ranking = Ranking(tuple(ranking), m)
            if ranking.m != m:
                raise BallotError(f"ranking over {ranking.m} candidates in a profile over {m}")
            if int(count) != count or count < 1:
                raise BallotError(f"multiplicity must be a positive integer, got {count!r}")
            rows.append(ranking.ordered)
            counts.append(int(count))
        if not rows:
            raise BallotError("a profile needs at least one voter")
        ranks = np.full((len(rows), m), m, dtype=np.int64)
        for b, ordered in enumerate(rows):
            ranks[b, list(ordered)] = np.arange(len(ordered))
        self._set(m, ranks, np.asarray(counts, dtype=np.int64),
                  np.asarray([len(r) for r in rows], dtype=np.int64))

    def _set(self, m, ranks, counts, lengths) -> None:
        for arr in (ranks, counts, lengths):
            arr.flags.writeable = False
        self.m = m
        self.ranks = ranks
        self.counts = counts
        self.lengths = lengths

    @classmethod
    def _from_arrays(cls, m: int, ranks: np.ndarray, counts: np.ndarray,
                     lengths: np.ndarray) -> Profile:
        # Trusted constructor: callers guarantee the arrays are consistent.
        self = cls.__new__(cls)
        self._set(m, ranks, counts, lengths)
        return self

    @classmethod
    def from_rankings(cls, rankings: Iterable[Sequence[int] | Ranking], m: int) -> Profile:
        """Build a profile from one ranking per voter, grouping duplicates.

        Ballot classes keep the order in which each ranking first appears.
        """
        grouped: dict[tuple[int, ...], int] = {}
        for r in rankings:
            key = r.ordered if isinstance(r, Ranking) else tuple(int(c) for c in r)
            grouped[key] = grouped.get(key, 0) + 1
        return cls(m, grouped.items())

    @classmethod
    def from_orders(cls, orders: np.ndarray, m: int) -> Profile:
        """Group an ``(n, L)`` array of equal-length rankings into a profile.

        Rows are assumed valid (distinct candidates in range).  Ballot classes
        come out in lexicographic order of the rankings.
        """
        orders = np.asarray(orders, dtype=np.int64)
        uniq, counts = np.unique(orders, axis=0, return_counts=True)
        k, length = uniq.shape
        ranks = np.full((k, m), m, dtype=np.int64)
        np.put_along_axis(ranks, uniq, np.broadcast_to(np.arange(length), uniq.shape), axis=1)
        return cls._from_arrays(m, ranks, counts.astype(np.int64),
                                np.full(k, length, dtype=np.int64))

    @cached_property
    def ballots(self) -> tuple[tuple[Ranking, int], ...]:
        out = []
        for row, length, count in zip(self.ranks, self.lengths, self.counts):
            ordered = np.argsort(row, kind="stable")[: int(length)]
            out.append((Ranking(tuple(int(c) for c in ordered), self.m), int(count)))
        return tuple(out)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def candidates(self) -> range:
        return range(self.m)

    @property
    def is_complete(self) -> bool:
        return bool((self.lengths == self.m).all())

    def voters(self) -> list[Ranking]:
        """One ranking per voter, expanded from the multiplicities."""
        return [r for r, count in self.ballots for _ in range(count)]

    def __len__(self) -> int:
        return len(self.counts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Profile):
            return NotImplemented
        return self.m == other.m and self.ballots == other.ballots

    def __hash__(self) -> int:
        return hash((self.m, self.ballots))

    def __repr__(self) -> str:
        body = ", ".join(f"{r}x{c}" for r, c in self.ballots)
        return f"Profile(m={self.m}, {{{body}}})"


def truncate_profile(p: Profile, L: int) -> Profile:
    """Keep only the first ``L`` entries of every ballot."""
    if L < 1:
        raise BallotError(f"ballot length must be at least 1, got {L}")
    ranks = np.where(p.ranks < L, p.ranks, p.m)
    return Profile._from_arrays(p.m, ranks, p.counts.copy(), np.minimum(p.lengths, L))


def support_matrix(p: Profile) -> np.ndarray:
    """``S[a, b]`` = number of voters strictly preferring ``a`` to ``b``.

    A ranked candidate beats every unranked one; two unranked candidates
    contribute nothing either way.
    """
    beats = p.ranks[:, :, None] < p.ranks[:, None, :]
    return np.einsum("k,kab->ab", p.counts, beats.astype(np.int64))


def kendall_tau(r1: Ranking, r2: Ranking) -> int:
    """Number of candidate pairs ordered oppositely by two complete rankings."""
    if r1.m != r2.m:
        raise BallotError("rankings are over different candidate sets")
    if not (r1.is_complete and r2.is_complete):
        raise IncompleteRankingError("kendall_tau needs complete rankings")
    pos = {c: i for i, c in enumerate(r2.ordered)}
    seq = [pos[c] for c in r1.ordered]
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])

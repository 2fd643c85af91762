"""Plain-text ballot files.

::

    # comment
    candidates: Alice Bob Carol
    2: Alice > Bob > Carol
    1: Carol          # truncated ballot

Candidate indices follow declaration order.
"""

from __future__ import annotations

from collections.abc import Sequence

from .ballots import Profile, Ranking


class ProfileFileError(ValueError):
    def __init__(self, lineno: int | None, message: str):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


def parse_profile_file(text: str) -> tuple[Profile, list[str]]:
    """Return the profile and the declared candidate names."""
    names: list[str] | None = None
    index: dict[str, int] = {}
    ballots: list[tuple[Ranking, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if names is None:
            if head.strip() != "candidates" or not sep:
                raise ProfileFileError(lineno, "expected 'candidates: NAME ...' header")
            names = rest.split()
            if not names:
                raise ProfileFileError(lineno, "no candidates declared")
            if len(set(names)) != len(names):
                raise ProfileFileError(lineno, "duplicate candidate name in header")
            index = {name: i for i, name in enumerate(names)}
            continue
        if not sep:
            raise ProfileFileError(lineno, "expected 'COUNT: Name > Name ...'")
        try:
            count = int(head)
        except ValueError:
            raise ProfileFileError(lineno, f"bad count {head.strip()!r}") from None
        if count <= 0:
            raise ProfileFileError(lineno, f"count must be positive, got {count}")
        listed = [tok.strip() for tok in rest.split(">")]
        if any(not tok for tok in listed):
            raise ProfileFileError(lineno, "empty candidate name in ranking")
        for tok in listed:
            if tok not in index:
                raise ProfileFileError(lineno, f"unknown candidate {tok!r}")
        if len(set(listed)) != len(listed):
            raise ProfileFileError(lineno, "duplicate candidate in ranking")
        ballots.append((Ranking(tuple(index[tok] for tok in listed), len(names)), count))
    if names is None:
        raise ProfileFileError(None, "empty file: missing 'candidates:' header")
    if not ballots:
        raise ProfileFileError(None, "no ballots")
    return Profile(len(names), ballots), names


def format_profile_file(profile: Profile, names: Sequence[str]) -> str:
    if len(names) != profile.m:
        raise ValueError("one name per candidate required")
    lines = ["candidates: " + " ".join(names)]
    for ranking, count in profile.ballots:
        lines.append(f"{count}: " + " > ".join(names[c] for c in ranking.ordered))
    return "\n".join(lines) + "\n"

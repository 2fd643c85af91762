import pytest
from hypothesis import settings
from hypothesis import strategies as st

from truncalab.ballots import Profile

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def profile_of(m, *groups):
    """``profile_of(3, ("ABC", 2), ("BCA", 1))`` with letters as candidates."""
    ballots = []
    for letters, count in groups:
        ballots.append((tuple("ABCDEFG".index(ch) for ch in letters), count))
    return Profile(m, ballots)


@st.composite
def complete_voters(draw, min_m=1, max_m=6, max_n=12):
    m = draw(st.integers(min_m, max_m))
    voters = draw(st.lists(st.permutations(range(m)), min_size=1, max_size=max_n))
    return m, [tuple(v) for v in voters]


@st.composite
def truncated_voters(draw, min_m=1, max_m=6, max_n=12):
    m, voters = draw(complete_voters(min_m, max_m, max_n))
    lengths = draw(st.lists(st.integers(1, m), min_size=len(voters), max_size=len(voters)))
    return m, [v[:L] for v, L in zip(voters, lengths)]

from itertools import permutations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

import naive
from conftest import complete_voters, profile_of, truncated_voters
from truncalab.ballots import Profile, truncate_profile
from truncalab.rules import (RULES, bucklin_adapted, condorcet_winner, coombs_adapted,
                             first_place_tally, last_place_tally, plurality_with_runoff,
                             schulze_beat_path, strongest_paths, winning_set)

A, B, C, D = range(4)
CYCLE = profile_of(3, ("ABC", 1), ("BCA", 1), ("CAB", 1))
TWO_ROUND = profile_of(3, ("ABC", 2), ("BCA", 2), ("CBA", 1))


# -- tallies -----------------------------------------------------------------

def test_last_place_complete_ballots():
    assert last_place_tally(profile_of(3, ("ABC", 5)), [A, B, C]).tolist() == [0, 0, 5]


def test_last_place_single_unranked():
    assert last_place_tally(profile_of(3, ("AB", 2)), [A, B, C]).tolist() == [0, 0, 2]


def test_last_place_every_unranked_gets_a_vote():
    assert last_place_tally(profile_of(4, ("A", 1))).tolist() == [0, 1, 1, 1]


def test_last_place_restricted_to_remaining():
    # B and C both remain; the ballot ranks B but not C
    assert last_place_tally(profile_of(4, ("DAB", 3)), [B, C]).tolist() == [0, 0, 3, 0]
    # all remaining ranked: lowest remaining one takes it
    assert last_place_tally(profile_of(4, ("DAB", 3)), [A, D]).tolist() == [3, 0, 0, 0]


def test_last_place_alternative_modes():
    p = profile_of(4, ("A", 3), ("ABCD", 1))
    assert last_place_tally(p, mode="fractional").tolist() == pytest.approx([0, 1, 1, 2])
    assert last_place_tally(p, mode="ranked_only").tolist() == [3, 0, 0, 1]
    with pytest.raises(ValueError):
        last_place_tally(p, mode="half")


def test_last_place_empty_remaining_rejected():
    with pytest.raises(ValueError):
        last_place_tally(CYCLE, [])


def test_first_place_abstains_when_nothing_remaining_is_ranked():
    p = profile_of(4, ("AB", 2), ("C", 1))
    assert first_place_tally(p, [B, C]).tolist() == [0, 2, 1, 0]
    assert first_place_tally(p, [D]).tolist() == [0, 0, 0, 0]


# -- plurality with runoff ---------------------------------------------------

def test_runoff_first_round_majority():
    assert plurality_with_runoff(profile_of(3, ("ABC", 2), ("ACB", 1))) == {A}


def test_runoff_two_finalists():
    # first place A2 B2 C1 -> finalists A, B; C's ballot transfers to B
    assert plurality_with_runoff(TWO_ROUND) == {B}


def test_runoff_three_way_tie():
    assert plurality_with_runoff(CYCLE) == {A, B, C}


def test_runoff_unique_leader_takes_all_tied_seconds():
    # A3 B2 C2 D0 of 7 -> A meets B and C, winning both 5-2
    p = profile_of(4, ("ADBC", 3), ("BDAC", 2), ("CDAB", 2))
    assert plurality_with_runoff(p) == {A}


def test_runoff_tied_leaders_exclude_third():
    # A2 B2 C1: A and B tie at the top, so C does not advance; C -> A
    p = profile_of(3, ("ABC", 2), ("BAC", 2), ("CAB", 1))
    assert plurality_with_runoff(p) == {A}


def test_runoff_pairs_are_decided_separately():
    # A3 B2 C2: A meets B and C in separate runoffs and loses both 3-4
    p = profile_of(3, ("ABC", 3), ("BCA", 2), ("CBA", 2))
    assert plurality_with_runoff(p) == {B, C}


def test_runoff_tied_pair_sends_both():
    p = profile_of(4, ("ABCD", 2), ("BACD", 1), ("CBAD", 1), ("DCBA", 1))
    # A2 B1 C1 D1 of 5; A-B 2:3, A-C 3:2, A-D 3:2 -> B from the first pair, A from the others
    assert plurality_with_runoff(p) == {A, B}


def test_runoff_ballots_without_finalist_abstain():
    # A2 B2 C1 D0 of 5; finalists A,B; the C bullet vote abstains in the runoff
    p = profile_of(4, ("AB", 2), ("BA", 2), ("C", 1))
    assert plurality_with_runoff(p) == {A, B}


# -- bucklin -----------------------------------------------------------------

def test_bucklin_second_level():
    p = profile_of(3, ("ABC", 2), ("BAC", 2), ("CAB", 1))
    assert bucklin_adapted(p) == {A}


def test_bucklin_fallback_on_bullet_votes():
    assert bucklin_adapted(profile_of(3, ("A", 1), ("B", 1), ("C", 1))) == {A, B, C}


def test_bucklin_unanimous():
    assert bucklin_adapted(profile_of(3, ("ABC", 7))) == {A}


def test_bucklin_fallback_picks_highest_score():
    assert bucklin_adapted(profile_of(3, ("A", 2), ("B", 1), ("C", 1))) == {A}


# -- coombs ------------------------------------------------------------------

def test_coombs_two_rounds():
    # last place A3 C2 -> A out; then B has 4 of 5 first places
    assert coombs_adapted(TWO_ROUND) == {B}


def test_coombs_unanimous():
    assert coombs_adapted(profile_of(3, ("ABC", 9))) == {A}


def test_coombs_symmetric_cycle_returns_everyone():
    assert coombs_adapted(CYCLE) == {A, B, C}


def test_coombs_eliminates_ties_together():
    # last place: C and D tie at 2 -> both out; A vs B then 2 vs 2, stalls
    p = profile_of(4, ("ABCD", 1), ("ABDC", 1), ("BACD", 1), ("BADC", 1))
    assert coombs_adapted(p) == {A, B}


def test_coombs_modes_differ_on_bullet_votes():
    p = profile_of(4, ("A", 2), ("B", 2), ("CBDA", 1))
    assert coombs_adapted(p, "full") == naive.coombs(
        [(A,), (A,), (B,), (B,), (C, B, D, A)], 4)
    for mode in ("fractional", "ranked_only"):
        assert coombs_adapted(p, mode)


# -- schulze and condorcet ---------------------------------------------------

def test_schulze_condorcet_winner():
    p = profile_of(3, ("ABC", 2), ("BCA", 1))
    assert condorcet_winner(p) == A
    assert schulze_beat_path(p) == {A}


def test_schulze_cycle():
    assert condorcet_winner(CYCLE) is None
    assert schulze_beat_path(CYCLE) == {A, B, C}


def test_schulze_unanimous():
    p = profile_of(4, ("ABCD", 4))
    assert condorcet_winner(p) == A
    assert schulze_beat_path(p) == {A}


def test_schulze_classic_example():
    # Wikipedia's 45-voter example, winner E
    p = profile_of(5, ("ACBED", 5), ("ADECB", 5), ("BEDAC", 8), ("CABED", 3),
                   ("CAEBD", 7), ("CBADE", 2), ("DCEBA", 7), ("EBADC", 8))
    assert schulze_beat_path(p) == {4}


def test_strongest_paths_bottleneck():
    margins = [[0, 5, -5], [-5, 0, 3], [5, -3, 0]]
    paths = strongest_paths(margins)
    assert paths[0, 2] == 3     # via B
    assert paths[2, 1] == 5     # via A


def test_winning_set_rejects_unknown_rule():
    with pytest.raises(ValueError):
        winning_set("borda", CYCLE)


# -- properties --------------------------------------------------------------

@given(truncated_voters())
def test_rules_return_nonempty_subsets(mv):
    m, voters = mv
    p = Profile.from_rankings(voters, m)
    for rule in RULES:
        w = winning_set(rule, p)
        assert w and w <= set(range(m))


@given(truncated_voters(), st.randoms(use_true_random=False))
def test_anonymity(mv, rnd):
    m, voters = mv
    shuffled = list(voters)
    rnd.shuffle(shuffled)
    p, q = Profile.from_rankings(voters, m), Profile.from_rankings(shuffled, m)
    for rule in RULES:
        assert winning_set(rule, p) == winning_set(rule, q)


@given(truncated_voters(), st.randoms(use_true_random=False))
def test_neutrality(mv, rnd):
    m, voters = mv
    sigma = list(range(m))
    rnd.shuffle(sigma)
    p = Profile.from_rankings(voters, m)
    q = Profile.from_rankings([tuple(sigma[c] for c in v) for v in voters], m)
    for rule in RULES:
        assert winning_set(rule, q) == {sigma[c] for c in winning_set(rule, p)}


@given(complete_voters(), st.integers(0, 5))
def test_unanimity_at_every_length(mv, top):
    m, voters = mv
    top %= m
    voters = [(top,) + tuple(c for c in v if c != top) for v in voters]
    p = Profile.from_rankings(voters, m)
    for L in range(1, m + 1):
        for rule in RULES:
            assert winning_set(rule, truncate_profile(p, L)) == {top}


@given(complete_voters(min_m=2, max_m=7, max_n=30))
def test_dropping_last_candidate_changes_nothing(mv):
    m, voters = mv
    p = Profile.from_rankings(voters, m)
    for rule in RULES:
        assert winning_set(rule, truncate_profile(p, m - 1)) == winning_set(rule, p)


@given(truncated_voters(max_m=6, max_n=15))
def test_schulze_is_condorcet_consistent(mv):
    m, voters = mv
    p = Profile.from_rankings(voters, m)
    c = condorcet_winner(p)
    if c is not None:
        assert schulze_beat_path(p) == {c}


@given(complete_voters(min_m=1, max_m=7, max_n=30))
def test_bucklin_half_ballot_guarantee(mv):
    m, voters = mv
    p = Profile.from_rankings(voters, m)
    truth = bucklin_adapted(p)
    for L in range(m // 2 + 1, m + 1):
        assert bucklin_adapted(truncate_profile(p, L)) == truth


@given(truncated_voters(max_m=5, max_n=9))
def test_rules_match_naive_on_random_truncated_profiles(mv):
    m, voters = mv
    p = Profile.from_rankings(voters, m)
    for name, oracle in naive.RULES.items():
        assert winning_set(name, p) == oracle(voters, m)
    assert condorcet_winner(p) == naive.condorcet(voters, m)


def test_rules_match_naive_exhaustively_three_voters():
    orders = list(permutations(range(3)))
    for voters in product(orders, repeat=3):
        p = Profile.from_rankings(voters, 3)
        for L in (1, 2, 3):
            short = naive.truncate(voters, L)
            q = truncate_profile(p, L)
            for name, oracle in naive.RULES.items():
                assert winning_set(name, q) == oracle(short, 3), (name, voters, L)

"""Forced ballot truncation experiments for Bucklin, Coombs, plurality with
runoff and Schulze."""

from .ballots import (BallotError, Profile, Ranking, kendall_tau, make_ranking,
                      support_matrix, truncate_profile)
from .experiment import (GridConfig, ResultTable, emit_csv, run_grid, run_trial)
from .mallows import MallowsParams, sample_profile, sample_ranking_rim
from .rules import (RULES, bucklin_adapted, condorcet_winner, coombs_adapted,
                    last_place_tally, plurality_with_runoff, schulze_beat_path,
                    winning_set)

__version__ = "0.1.0"

__all__ = [
    "BallotError", "GridConfig", "MallowsParams", "Profile", "RULES", "Ranking",
    "ResultTable", "bucklin_adapted", "condorcet_winner", "coombs_adapted",
    "emit_csv", "kendall_tau", "last_place_tally", "make_ranking",
    "plurality_with_runoff", "run_grid", "run_trial", "sample_profile",
    "sample_ranking_rim", "schulze_beat_path", "support_matrix",
    "truncate_profile", "winning_set",
]

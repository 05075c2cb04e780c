"""Approximate equilibrium solver for the continuous asymmetric-information
Blotto game: fictitious play over stored pure strategies with exact
knapsack-based best responses and exploitability tracking."""

from .best_response import (
    BestResponseResult,
    SlotCandidateList,
    best_response_1,
    best_response_2,
    brute_force_oracle,
    candidate_set_1,
    candidate_set_2,
    solve_mckp,
)
from .engine import EngineState, RunOptions, TraceRecord, initialize, run, sample_subset, step
from .game import (
    Allocation,
    ConditionalAllocation,
    Game,
    GameValidationError,
    History,
    InvalidStrategyError,
    exploitability_naive,
    mixture_value_naive,
    slot_payoff1,
    utility1,
    utility2,
    validate_game,
)

__all__ = [
    "Allocation",
    "BestResponseResult",
    "ConditionalAllocation",
    "EngineState",
    "Game",
    "GameValidationError",
    "History",
    "InvalidStrategyError",
    "RunOptions",
    "SlotCandidateList",
    "TraceRecord",
    "best_response_1",
    "best_response_2",
    "brute_force_oracle",
    "candidate_set_1",
    "candidate_set_2",
    "exploitability_naive",
    "initialize",
    "mixture_value_naive",
    "run",
    "sample_subset",
    "slot_payoff1",
    "solve_mckp",
    "step",
    "utility1",
    "utility2",
    "validate_game",
]

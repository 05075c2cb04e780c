"""Continuous Blotto game model and reference (naive) evaluation procedures.

The game is an asymmetric-information resource allocation contest: player 1
commits one amount per slot without knowing which battlefield sits in which
slot, while player 2 observes the outcome (a permutation of battlefields over
slots) and conditions their allocation on it.  A slot is won by player 1 only
with a margin of at least ``delta``; ties and sub-margin differences favor
player 2 or score zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PROB_TOL = 1e-12
BUDGET_TOL = 1e-9


class GameValidationError(ValueError):
    """A game description violates a model invariant."""


class NonPositiveValue(GameValidationError):
    pass


class BadPermutation(GameValidationError):
    pass


class ProbsNotNormalized(GameValidationError):
    pass


class NonPositiveBudget(GameValidationError):
    pass


class NonPositiveDelta(GameValidationError):
    pass


class InvalidStrategyError(ValueError):
    """A pure strategy violates nonnegativity or the budget equality."""


def _frozen_array(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Game:
    """Immutable continuous-Blotto instance.

    ``outcomes[o][q]`` is the battlefield index occupying slot ``q`` under
    outcome ``o``; each row must be a permutation of ``0..|F|-1``.
    """

    battlefield_values: np.ndarray
    outcomes: np.ndarray
    outcome_probs: np.ndarray
    budget1: float
    budget2: float
    delta: float
    # derived: value and probability-weighted value of the battlefield in
    # each (outcome, slot) cell
    slot_values: np.ndarray = field(init=False, repr=False, compare=False)
    slot_weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        values = _frozen_array(self.battlefield_values)
        outcomes = _frozen_array(self.outcomes, dtype=int)
        probs = _frozen_array(self.outcome_probs)
        object.__setattr__(self, "battlefield_values", values)
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "outcome_probs", probs)

        if values.ndim != 1 or values.size == 0 or (values <= 0).any():
            raise NonPositiveValue("battlefield values must be positive reals")
        n = values.size
        if outcomes.ndim != 2 or outcomes.shape[1] != n or outcomes.shape[0] == 0:
            raise BadPermutation(f"outcomes must be an M x {n} array of permutations")
        ref = np.arange(n)
        for row in outcomes:
            if not np.array_equal(np.sort(row), ref):
                raise BadPermutation(f"outcome {row.tolist()} is not a permutation of 0..{n - 1}")
        if probs.shape != (outcomes.shape[0],) or (probs < 0).any():
            raise ProbsNotNormalized("one nonnegative probability per outcome is required")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise ProbsNotNormalized(f"outcome probabilities sum to {probs.sum()!r}, not 1")
        if not self.budget1 > 0:
            raise NonPositiveBudget(f"budget1 must be positive, got {self.budget1!r}")
        if not self.budget2 > 0:
            raise NonPositiveBudget(f"budget2 must be positive, got {self.budget2!r}")
        if not self.delta > 0:
            raise NonPositiveDelta(f"delta must be positive, got {self.delta!r}")

        slot_values = _frozen_array(values[outcomes])
        slot_weights = _frozen_array(probs[:, None] * slot_values)
        object.__setattr__(self, "slot_values", slot_values)
        object.__setattr__(self, "slot_weights", slot_weights)

    @property
    def num_battlefields(self) -> int:
        return self.battlefield_values.size

    @property
    def num_outcomes(self) -> int:
        return self.outcomes.shape[0]


def validate_game(raw: dict) -> Game:
    """Build a :class:`Game` from a parsed configuration mapping.

    Raises a :class:`GameValidationError` subclass naming the offending field
    when the description is invalid.
    """
    required = [
        "battlefield_values",
        "outcomes",
        "outcome_probs",
        "budget_p1",
        "budget_p2",
        "delta",
    ]
    missing = [k for k in required if k not in raw]
    if missing:
        raise GameValidationError(f"missing field(s): {', '.join(missing)}")
    try:
        return Game(
            battlefield_values=raw["battlefield_values"],
            outcomes=raw["outcomes"],
            outcome_probs=raw["outcome_probs"],
            budget1=float(raw["budget_p1"]),
            budget2=float(raw["budget_p2"]),
            delta=float(raw["delta"]),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GameValidationError):
            raise
        raise GameValidationError(str(exc)) from exc


class Allocation:
    """Player 1 pure strategy: one nonnegative amount per slot, summing to B1."""

    __slots__ = ("amounts",)

    def __init__(self, amounts, budget: float):
        arr = _frozen_array(amounts)
        if arr.ndim != 1:
            raise InvalidStrategyError("allocation must be a flat vector")
        if (arr < 0).any():
            raise InvalidStrategyError("allocation amounts must be nonnegative")
        if abs(arr.sum() - budget) > BUDGET_TOL:
            raise InvalidStrategyError(
                f"allocation sums to {arr.sum()!r}, budget is {budget!r}"
            )
        self.amounts = arr

    def __repr__(self):
        return f"Allocation({self.amounts.tolist()})"


class ConditionalAllocation:
    """Player 2 pure strategy: an M x |F| matrix, each row summing to B2."""

    __slots__ = ("amounts",)

    def __init__(self, amounts, budget: float):
        arr = _frozen_array(amounts)
        if arr.ndim != 2:
            raise InvalidStrategyError("conditional allocation must be a matrix")
        if (arr < 0).any():
            raise InvalidStrategyError("allocation amounts must be nonnegative")
        sums = arr.sum(axis=1)
        bad = np.abs(sums - budget) > BUDGET_TOL
        if bad.any():
            o = int(np.argmax(bad))
            raise InvalidStrategyError(
                f"row {o} sums to {sums[o]!r}, budget is {budget!r}"
            )
        self.amounts = arr

    def __repr__(self):
        return f"ConditionalAllocation({self.amounts.tolist()})"


@dataclass
class History:
    """Ordered pure-strategy lists, read as uniform mixtures over entries."""

    entries1: list
    entries2: list

    def stacked1(self, upto: int | None = None) -> np.ndarray:
        end = len(self.entries1) if upto is None else upto + 1
        return np.stack([e.amounts for e in self.entries1[:end]])

    def stacked2(self, upto: int | None = None) -> np.ndarray:
        end = len(self.entries2) if upto is None else upto + 1
        return np.stack([e.amounts for e in self.entries2[:end]])

    def __len__(self):
        return len(self.entries1)


def _amounts(strategy) -> np.ndarray:
    return np.asarray(getattr(strategy, "amounts", strategy), dtype=float)


def slot_payoff1(x: float, y: float, value: float, delta: float) -> float:
    """Player 1's payoff on one slot: +value with a delta margin, -value on
    ties or worse, 0 inside the gap."""
    if x >= y + delta:
        return value
    if x <= y:
        return -value
    return 0.0


def utility1(game: Game, s1, s2) -> float:
    """Expected payoff to player 1 of a pure strategy pair."""
    x = _amounts(s1)
    y = _amounts(s2)
    if x.shape != (game.num_battlefields,):
        raise ValueError(f"player 1 strategy has shape {x.shape}")
    if y.shape != (game.num_outcomes, game.num_battlefields):
        raise ValueError(f"player 2 strategy has shape {y.shape}")
    wins = x[None, :] >= y + game.delta
    losses = x[None, :] <= y
    return float(np.sum(game.slot_weights * wins) - np.sum(game.slot_weights * losses))


def utility2(game: Game, s1, s2) -> float:
    """Expected payoff to player 2; the game is zero-sum by construction."""
    return -utility1(game, s1, s2)


def mixture_value_naive(game: Game, history: History, t: int) -> float:
    """Game value to player 1 of the uniform history mixtures at iteration t,
    computed by full pairwise enumeration (the reference procedure)."""
    if t < 0 or t >= len(history.entries1) or t >= len(history.entries2):
        raise IndexError(f"iteration {t} out of range for history of length {len(history)}")
    total = 0.0
    for t1 in range(t + 1):
        for t2 in range(t + 1):
            total += utility1(game, history.entries1[t1], history.entries2[t2])
    return total / (t + 1) ** 2


def exploitability_naive(
    game: Game,
    history: History,
    t: int,
    br_strategy1,
    br_strategy2,
    v_prev1: float,
    v_prev2: float,
) -> tuple[float, float, float]:
    """Per-player exploitability at iteration t, computed naively.

    ``br_strategy1``/``br_strategy2`` are the iteration-t best responses and
    ``v_prev1``/``v_prev2`` the iteration t-1 mixture values.
    """
    if t < 1:
        raise ValueError("exploitability is defined only for t >= 1")
    acc1 = 0.0
    for t2 in range(t):
        acc1 += utility1(game, br_strategy1, history.entries2[t2])
    eps1 = acc1 / t - v_prev1
    acc2 = 0.0
    for t1 in range(t):
        acc2 += utility2(game, history.entries1[t1], br_strategy2)
    eps2 = acc2 / t - v_prev2
    return eps1, eps2, max(eps1, eps2)

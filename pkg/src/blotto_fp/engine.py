"""Redundant fictitious play driver.

Every iteration stores both players' pure best responses individually; the
mixed strategy at time t is the uniform mixture over the stored entries.  The
mixture value v*1[t] is maintained incrementally (one row/column of new
pairings per iteration) and matches the naive full-pairwise recomputation to
floating-point accumulation error.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .best_response import best_response_1, best_response_2
from .game import Allocation, ConditionalAllocation, Game, History

INIT_MODES = ("uniform", "random")
BR_MODES = ("wins", "utility")


@dataclass(frozen=True)
class RunOptions:
    iterations: int
    report_every: int = 10
    init_mode: str = "uniform"
    seed: int = 0
    sample_k: int | None = None
    br_mode: str = "wins"

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.report_every < 1:
            raise ValueError("report_every must be >= 1")
        if self.init_mode not in INIT_MODES:
            raise ValueError(f"init_mode must be one of {INIT_MODES}")
        if self.br_mode not in BR_MODES:
            raise ValueError(f"br_mode must be one of {BR_MODES}")
        if self.sample_k is not None and self.sample_k < 1:
            raise ValueError("sample_k must be >= 1")


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    elapsed_seconds: float
    eps1: float
    eps2: float
    eps: float
    v_star1: float


class EngineState:
    """Mutable run state: growing strategy arrays plus running metrics."""

    def __init__(self, game: Game, capacity: int):
        f = game.num_battlefields
        m = game.num_outcomes
        self._h1 = np.zeros((capacity, f))
        self._h2 = np.zeros((capacity, m, f))
        self.t = -1
        self.pair_sum1 = 0.0
        self.v_star1 = math.nan
        self.v_star2 = math.nan
        self.eps1 = math.nan
        self.eps2 = math.nan
        self.eps = math.nan
        self.rng: np.random.Generator | None = None

    def _ensure_capacity(self, needed: int):
        if needed <= self._h1.shape[0]:
            return
        cap = max(needed, 2 * self._h1.shape[0])
        h1 = np.zeros((cap,) + self._h1.shape[1:])
        h2 = np.zeros((cap,) + self._h2.shape[1:])
        h1[: self.t + 1] = self._h1[: self.t + 1]
        h2[: self.t + 1] = self._h2[: self.t + 1]
        self._h1 = h1
        self._h2 = h2

    def append(self, s1: np.ndarray, s2: np.ndarray):
        self._ensure_capacity(self.t + 2)
        self.t += 1
        self._h1[self.t] = s1
        self._h2[self.t] = s2

    @property
    def history1(self) -> np.ndarray:
        return self._h1[: self.t + 1]

    @property
    def history2(self) -> np.ndarray:
        return self._h2[: self.t + 1]

    def history(self, game: Game) -> History:
        entries1 = [Allocation(row, game.budget1) for row in self.history1]
        entries2 = [ConditionalAllocation(mat, game.budget2) for mat in self.history2]
        return History(entries1, entries2)


def sample_simplex(rng: np.random.Generator, n: int, total: float) -> np.ndarray:
    """Uniform point on the scaled simplex via exponential spacings."""
    if n == 1:
        return np.array([total])
    e = rng.exponential(size=n)
    return e / e.sum() * total


def sample_subset(history_side: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform sample of k entries without replacement, in history order."""
    n = len(history_side)
    if k > n:
        raise ValueError(f"sample size {k} exceeds history length {n}")
    idx = np.sort(rng.choice(n, size=k, replace=False))
    return history_side[idx]


def _pair_utility1(game: Game, s1: np.ndarray, s2: np.ndarray) -> float:
    wins = s1[None, :] >= s2 + game.delta
    losses = s1[None, :] <= s2
    return float(np.sum(game.slot_weights * wins) - np.sum(game.slot_weights * losses))


def _sum_u1_vs_h2(game: Game, s1: np.ndarray, h2: np.ndarray) -> float:
    wins = s1[None, None, :] >= h2 + game.delta
    losses = s1[None, None, :] <= h2
    w = game.slot_weights[None, :, :]
    return float(np.sum(w * wins) - np.sum(w * losses))


def _sum_u1_vs_h1(game: Game, h1: np.ndarray, s2: np.ndarray) -> float:
    wins = h1[:, None, :] >= s2[None, :, :] + game.delta
    losses = h1[:, None, :] <= s2[None, :, :]
    w = game.slot_weights[None, :, :]
    return float(np.sum(w * wins) - np.sum(w * losses))


def initialize(game: Game, options: RunOptions) -> EngineState:
    """Seed the histories with the iteration-0 strategies and their value."""
    state = EngineState(game, options.iterations + 1)
    state.rng = np.random.default_rng(options.seed)
    f = game.num_battlefields
    m = game.num_outcomes
    if options.init_mode == "uniform":
        s1 = np.full(f, game.budget1 / f)
        s2 = np.full((m, f), game.budget2 / f)
    else:
        s1 = sample_simplex(state.rng, f, game.budget1)
        s2 = np.stack([sample_simplex(state.rng, f, game.budget2) for _ in range(m)])
    state.append(s1, s2)
    state.pair_sum1 = _pair_utility1(game, s1, s2)
    state.v_star1 = state.pair_sum1
    state.v_star2 = -state.v_star1
    return state


def step(game: Game, state: EngineState, options: RunOptions) -> EngineState:
    """Run one fictitious-play iteration, updating metrics in place.

    Both best responses are computed against the time-(t-1) mixtures before
    either is appended.  With sample_k set, only the best-response inputs are
    sampled; epsilon and v* bookkeeping always use the full history.
    """
    t = state.t + 1
    h1_prev = state.history1
    h2_prev = state.history2

    br_input2 = h2_prev
    br_input1 = h1_prev
    if options.sample_k is not None and options.sample_k < t:
        br_input2 = sample_subset(h2_prev, options.sample_k, state.rng)
        br_input1 = sample_subset(h1_prev, options.sample_k, state.rng)

    # Rotate the surplus-deposit slot across the M+1 solves of each iteration.
    # The best-response optimum leaves the budget surplus free to sit on any
    # slot; always parking it on the same slot locks the play into a
    # minimal-increment bidding loop and the history mixture never spreads.
    f = game.num_battlefields
    base = (t - 1) * (game.num_outcomes + 1)
    s1_new = best_response_1(
        game, br_input2, options.br_mode, deposit_slot=base % f
    ).strategy
    s2_new = np.stack(
        [
            best_response_2(
                game, br_input1, o, options.br_mode, deposit_slot=(base + 1 + o) % f
            ).strategy
            for o in range(game.num_outcomes)
        ]
    )

    state.eps1 = _sum_u1_vs_h2(game, s1_new, h2_prev) / t - state.v_star1
    state.eps2 = -_sum_u1_vs_h1(game, h1_prev, s2_new) / t - state.v_star2
    state.eps = max(state.eps1, state.eps2)

    state.pair_sum1 += (
        _sum_u1_vs_h2(game, s1_new, h2_prev)
        + _sum_u1_vs_h1(game, h1_prev, s2_new)
        + _pair_utility1(game, s1_new, s2_new)
    )
    state.append(s1_new, s2_new)
    state.v_star1 = state.pair_sum1 / (t + 1) ** 2
    state.v_star2 = -state.v_star1
    return state


def run(game: Game, options: RunOptions, trace_sink=None) -> EngineState:
    """Execute initialize plus ``options.iterations`` steps.

    A TraceRecord is emitted at every multiple of ``report_every`` (including
    iteration 0, where the epsilons are undefined and reported as NaN) and at
    the final iteration.
    """
    start = time.perf_counter()
    state = initialize(game, options)

    def emit(iteration: int):
        if trace_sink is not None:
            trace_sink(
                TraceRecord(
                    iteration=iteration,
                    elapsed_seconds=time.perf_counter() - start,
                    eps1=state.eps1,
                    eps2=state.eps2,
                    eps=state.eps,
                    v_star1=state.v_star1,
                )
            )

    emit(0)
    for t in range(1, options.iterations + 1):
        step(game, state, options)
        if t % options.report_every == 0 or t == options.iterations:
            emit(t)
    return state

"""Exact best responses to uniform history mixtures.

The per-slot payoff against a fixed finite mixture is a nondecreasing step
function of the amount placed on that slot, so a best response only needs to
consider finitely many candidate amounts per slot (the thresholds where the
step function jumps, plus gap midpoints when optimizing true utility).  The
resulting problem -- pick one candidate per slot, maximize the summed
objective under the shared budget -- is a multiple-choice knapsack, solved
exactly by depth-first branch-and-bound with a fractional convex-hull bound.

Two objectives are supported.  ``wins`` counts only the probability-weighted
value of slots won (candidates are the win thresholds); ``utility`` adds gap
midpoints as candidates and maximizes the true expected payoff, which also
credits turning losses into scoreless gaps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .game import Game

MERGE_TOL = 1e-12
FEAS_TOL = 1e-12
ORACLE_LIMIT = 10**7

MODES = ("wins", "utility")


@dataclass(frozen=True)
class SlotCandidateList:
    """Candidate amounts for one slot with their objective values.

    Amounts are strictly increasing and start at 0; after dominance pruning
    the primary objective is strictly increasing along the list as well.
    """

    slot: int
    amounts: np.ndarray
    win_weights: np.ndarray
    true_values: np.ndarray


@dataclass(frozen=True)
class BestResponseResult:
    strategy: np.ndarray
    objective_win_weight: float
    true_avg_utility: float


def _check_mode(mode: str):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _stack1(history1) -> np.ndarray:
    arr = np.stack([np.asarray(getattr(e, "amounts", e), dtype=float) for e in history1])
    if arr.shape[0] == 0:
        raise ValueError("history must be nonempty")
    return arr


def _stack2(history2) -> np.ndarray:
    arr = np.stack([np.asarray(getattr(e, "amounts", e), dtype=float) for e in history2])
    if arr.shape[0] == 0:
        raise ValueError("history must be nonempty")
    return arr


def _merge_close(sorted_vals: np.ndarray) -> np.ndarray:
    """Collapse values closer than MERGE_TOL, keeping the first of each run."""
    if sorted_vals.size == 0:
        return sorted_vals
    keep = np.empty(sorted_vals.size, dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(sorted_vals) > MERGE_TOL
    return sorted_vals[keep]


def _step_sum(points: np.ndarray, weights: np.ndarray, queries: np.ndarray, closed: bool) -> np.ndarray:
    """Sum of weights over points <= q (closed) or < q (open), per query."""
    order = np.argsort(points, kind="stable")
    pts = points[order]
    cum = np.concatenate([[0.0], np.cumsum(weights[order])])
    side = "right" if closed else "left"
    return cum[np.searchsorted(pts, queries, side=side)]


def _prune(slot: int, amounts, win_weights, true_values, key) -> SlotCandidateList:
    """Drop candidates whose primary objective does not strictly improve on a
    cheaper one; amounts and the primary objective end up strictly increasing."""
    keep = [0]
    for i in range(1, len(amounts)):
        if key[i] > key[keep[-1]]:
            keep.append(i)
    idx = np.array(keep)
    return SlotCandidateList(
        slot=slot,
        amounts=amounts[idx],
        win_weights=win_weights[idx],
        true_values=true_values[idx],
    )


def candidate_set_1(game: Game, history_p2, slot: int, mode: str = "wins") -> SlotCandidateList:
    """Candidate amounts for player 1 on one slot against a player 2 history.

    Win thresholds sit delta above each historical opponent amount; in
    ``utility`` mode midpoints of consecutive breakpoints are added so every
    constant piece of the true per-slot payoff contains a candidate.
    """
    _check_mode(mode)
    h2 = _stack2(history_p2)
    n_hist = h2.shape[0]
    y = h2[:, :, slot].ravel()
    # per-(t, o) weight of winning this slot, averaged over the history
    w = np.tile(game.slot_weights[:, slot], n_hist) / n_hist
    thresholds = y + game.delta

    cands = [np.array([0.0]), thresholds[thresholds <= game.budget1 + MERGE_TOL]]
    if mode == "utility":
        pts = _merge_close(np.sort(np.concatenate([y, thresholds])))
        mids = (pts[:-1] + pts[1:]) / 2.0
        cands.append(mids[mids <= game.budget1 + MERGE_TOL])
    amounts = _merge_close(np.sort(np.concatenate(cands)))

    win_weights = _step_sum(thresholds, w, amounts, closed=True)
    loss_weights = _step_sum(-y, w, -amounts, closed=True)  # weight of y >= a
    true_values = win_weights - loss_weights
    key = true_values if mode == "utility" else win_weights
    return _prune(slot, amounts, win_weights, true_values, key)


def candidate_set_2(game: Game, history_p1, outcome: int, slot: int, mode: str = "wins") -> SlotCandidateList:
    """Candidate amounts for player 2 on one slot, for one outcome, against a
    player 1 history.  Ties favor player 2, so win thresholds are the
    historical amounts themselves (no delta)."""
    _check_mode(mode)
    if not 0 <= outcome < game.num_outcomes:
        raise IndexError(f"outcome {outcome} out of range")
    h1 = _stack1(history_p1)
    n_hist = h1.shape[0]
    x = h1[:, slot]
    value = game.slot_values[outcome, slot]
    w = np.full(n_hist, value / n_hist)

    cands = [np.array([0.0]), x[x <= game.budget2 + MERGE_TOL]]
    if mode == "utility":
        pts = _merge_close(np.sort(np.concatenate([x - game.delta, x])))
        pts = np.clip(pts, 0.0, None)
        mids = (pts[:-1] + pts[1:]) / 2.0
        cands.append(mids[mids <= game.budget2 + MERGE_TOL])
    amounts = _merge_close(np.sort(np.concatenate(cands)))

    win_weights = _step_sum(x, w, amounts, closed=True)  # wins where a >= x
    loss_weights = _step_sum(-(x - game.delta), w, -amounts, closed=True)  # x - delta >= a
    true_values = win_weights - loss_weights
    key = true_values if mode == "utility" else win_weights
    return _prune(slot, amounts, win_weights, true_values, key)


def _objective_column(lst: SlotCandidateList, objective: str) -> np.ndarray:
    if objective == "win_weight":
        return lst.win_weights
    if objective == "true_value":
        return lst.true_values
    raise ValueError(f"unknown objective {objective!r}")


def _hull_increments(a: np.ndarray, w: np.ndarray):
    """Upper concave hull of one slot's (amount, objective) candidates,
    returned as (delta_amount, delta_objective) segments of decreasing slope."""
    hull = [0]
    for i in range(1, len(a)):
        while len(hull) >= 2:
            j, k = hull[-2], hull[-1]
            if (w[k] - w[j]) * (a[i] - a[k]) <= (w[i] - w[k]) * (a[k] - a[j]):
                hull.pop()
            else:
                break
        if w[i] > w[hull[-1]]:
            hull.append(i)
    da, dw = [], []
    for j, k in zip(hull[:-1], hull[1:]):
        da.append(a[k] - a[j])
        dw.append(w[k] - w[j])
    return da, dw


class _Mckp:
    """Depth-first branch-and-bound for one multiple-choice knapsack solve."""

    def __init__(self, arrays, budget):
        self.arrays = arrays
        self.budget = budget
        self.n = len(arrays)
        self._build_bounds()
        self.best_val = -np.inf
        self.best_sel = None

    def _build_bounds(self):
        # suffix fractional-relaxation envelopes: bound(k, cap) is the LP
        # optimum over slots k.. with capacity cap, a concave polyline
        per_slot = []
        for a, w in self.arrays:
            da, dw = _hull_increments(a, w)
            per_slot.append((da, dw))
        self.env_x = [None] * (self.n + 1)
        self.env_y = [None] * (self.n + 1)
        for k in range(self.n + 1):
            base = sum(self.arrays[j][1][0] for j in range(k, self.n))
            incs = []
            for j in range(k, self.n):
                da, dw = per_slot[j]
                incs.extend((dwi / dai, dai, dwi) for dai, dwi in zip(da, dw))
            incs.sort(key=lambda s: -s[0])
            xs = [0.0]
            ys = [base]
            for _, dai, dwi in incs:
                xs.append(xs[-1] + dai)
                ys.append(ys[-1] + dwi)
            self.env_x[k] = np.array(xs)
            self.env_y[k] = np.array(ys)

    def _bound(self, k: int, cap: float) -> float:
        val = float(np.interp(cap, self.env_x[k], self.env_y[k]))
        # padded so float rounding never prunes a true optimum
        return val + 1e-12 * (1.0 + abs(val))

    def solve(self):
        self._sel = [0] * self.n
        self._dfs(0, self.budget, 0.0)
        return self.best_sel, self.best_val

    def _dfs(self, k: int, cap: float, acc: float):
        a, w = self.arrays[k]
        limit = int(np.searchsorted(a, cap + FEAS_TOL, side="right"))
        if k == self.n - 1:
            i = limit - 1
            val = acc + w[i]
            if val > self.best_val:
                self._sel[k] = i
                self.best_val = val
                self.best_sel = list(self._sel)
            return
        if k == self.n - 2:
            a2, w2 = self.arrays[k + 1]
            rem = cap - a[:limit]
            j = np.searchsorted(a2, rem + FEAS_TOL, side="right") - 1
            vals = w[:limit] + w2[j]
            vmax = float(vals.max())
            if acc + vmax <= self.best_val:
                return
            # re-sum left-to-right for the near-maximal picks so the reported
            # value matches exhaustive enumeration bit for bit
            near = np.flatnonzero(vals >= vmax - 1e-12 * (1.0 + abs(vmax)))
            for i in near:
                val = (acc + w[i]) + w2[j[i]]
                if val > self.best_val:
                    self._sel[k] = int(i)
                    self._sel[k + 1] = int(j[i])
                    self.best_val = val
                    self.best_sel = list(self._sel)
            return
        for i in range(limit):
            rem = cap - a[i]
            if acc + w[i] + self._bound(k + 1, rem) <= self.best_val:
                continue
            self._sel[k] = i
            self._dfs(k + 1, rem, acc + w[i])


def solve_mckp(candidate_lists, budget: float, objective: str = "win_weight"):
    """Pick one candidate per slot maximizing the summed objective subject to
    the shared budget.  Returns (amounts per slot, objective value)."""
    if not budget > 0:
        raise ValueError("budget must be positive")
    arrays = []
    for lst in candidate_lists:
        if lst.amounts.size == 0 or lst.amounts[0] != 0.0:
            raise ValueError("each candidate list must contain amount 0")
        arrays.append((lst.amounts, _objective_column(lst, objective)))
    if len(arrays) == 1:
        a, w = arrays[0]
        i = int(np.searchsorted(a, budget + FEAS_TOL, side="right")) - 1
        return np.array([a[i]]), float(w[i])
    sel, val = _Mckp(arrays, budget).solve()
    amounts = np.array([arrays[k][0][i] for k, i in enumerate(sel)])
    return amounts, float(val)


def brute_force_oracle(candidate_lists, budget: float, objective: str = "win_weight") -> float:
    """Exhaustive enumeration over the full candidate product; test oracle."""
    sizes = [lst.amounts.size for lst in candidate_lists]
    product = 1
    for s in sizes:
        product *= s
    if product > ORACLE_LIMIT:
        raise ValueError(f"candidate product size {product} exceeds {ORACLE_LIMIT}")
    arrays = [(lst.amounts, _objective_column(lst, objective)) for lst in candidate_lists]
    best = -np.inf
    for combo in itertools.product(*(range(s) for s in sizes)):
        total = 0.0
        val = 0.0
        for k, i in enumerate(combo):
            total += arrays[k][0][i]
            val += arrays[k][1][i]
        if total <= budget + FEAS_TOL and val > best:
            best = val
    return float(best)


def _finalize(amounts: np.ndarray, budget: float, deposit_slot: int) -> np.ndarray:
    # payoff is nondecreasing in every amount, so depositing the leftover on
    # any single slot restores the budget equality without lowering the
    # objective; the caller picks the slot (the engine rotates it so that
    # successive responses do not collapse onto one escalation path)
    leftover = budget - amounts.sum()
    out = amounts.copy()
    out[deposit_slot] += max(0.0, leftover)
    return out


def best_response_1(
    game: Game, history_p2, mode: str = "wins", deposit_slot: int = 0
) -> BestResponseResult:
    """Exact best response for player 1 against a uniform mixture over a
    player 2 history."""
    _check_mode(mode)
    h2 = _stack2(history_p2)
    objective = "true_value" if mode == "utility" else "win_weight"
    lists = [candidate_set_1(game, h2, q, mode) for q in range(game.num_battlefields)]
    chosen, _ = solve_mckp(lists, game.budget1, objective)
    strategy = _finalize(chosen, game.budget1, deposit_slot)

    wins = strategy[None, None, :] >= h2 + game.delta
    losses = strategy[None, None, :] <= h2
    weights = game.slot_weights[None, :, :]
    win_weight = float(np.sum(weights * wins) / h2.shape[0])
    true_avg = float(np.sum(weights * wins) - np.sum(weights * losses)) / h2.shape[0]
    return BestResponseResult(strategy, win_weight, true_avg)


def best_response_2(
    game: Game, history_p1, outcome: int, mode: str = "wins", deposit_slot: int = 0
) -> BestResponseResult:
    """Exact best response row for player 2 under one outcome against a
    uniform mixture over a player 1 history."""
    _check_mode(mode)
    h1 = _stack1(history_p1)
    objective = "true_value" if mode == "utility" else "win_weight"
    lists = [
        candidate_set_2(game, h1, outcome, q, mode)
        for q in range(game.num_battlefields)
    ]
    chosen, _ = solve_mckp(lists, game.budget2, objective)
    strategy = _finalize(chosen, game.budget2, deposit_slot)

    values = game.slot_values[outcome][None, :]
    p2_wins = strategy[None, :] >= h1  # ties favor player 2
    p2_losses = h1 >= strategy[None, :] + game.delta
    win_weight = float(np.sum(values * p2_wins) / h1.shape[0])
    true_avg = float(np.sum(values * p2_wins) - np.sum(values * p2_losses)) / h1.shape[0]
    return BestResponseResult(strategy, win_weight, true_avg)

import numpy as np
import pytest

from blotto_fp import Game


@pytest.fixture
def paper_game() -> Game:
    return Game(
        battlefield_values=[0.7, 0.2, 0.1],
        outcomes=[[0, 1, 2], [2, 0, 1], [1, 2, 0]],
        outcome_probs=[1 / 3, 1 / 3, 1 / 3],
        budget1=10.0,
        budget2=7.0,
        delta=1e-4,
    )


def random_game(rng: np.random.Generator, max_fields: int = 4) -> Game:
    """Small random instance; delta is kept well below the budgets so the
    win margin stays a separation device rather than a budget-scale cost."""
    f = int(rng.integers(2, max_fields + 1))
    m = int(rng.integers(1, 4))
    values = rng.uniform(0.1, 1.0, size=f)
    outcomes = np.stack([rng.permutation(f) for _ in range(m)])
    probs = rng.dirichlet(np.ones(m))
    b1 = float(rng.uniform(1.0, 10.0))
    b2 = float(rng.uniform(1.0, 10.0))
    delta = float(rng.uniform(1e-5, 1e-3) * min(b1, b2))
    return Game(values, outcomes, probs, b1, b2, delta)


def random_history1(rng: np.random.Generator, game: Game, n: int) -> np.ndarray:
    f = game.num_battlefields
    e = rng.exponential(size=(n, f))
    return e / e.sum(axis=1, keepdims=True) * game.budget1


def random_history2(rng: np.random.Generator, game: Game, n: int) -> np.ndarray:
    f = game.num_battlefields
    m = game.num_outcomes
    e = rng.exponential(size=(n, m, f))
    return e / e.sum(axis=2, keepdims=True) * game.budget2

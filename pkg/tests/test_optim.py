"""
Tests for the CMA-ES and TPE optimizers and trial traces.
"""

import math

import numpy as np
import pytest

from fxsearch.exceptions import ArgumentError, OptimizerSelectionError
from fxsearch.models.results import SearchBudget, TrialRecord
from fxsearch.optim import Objective, cmaes_maximize, read_trace_csv, tpe_maximize, write_trace_csv
from fxsearch.optim.cmaes import cma_options, population_size
from fxsearch.optim.tpe import ParzenEstimator, n_good, n_startup_trials


def sphere(x: np.ndarray) -> float:
    return -float(np.sum((x - 0.7) ** 2))


def rosenbrock_in_box(u: np.ndarray) -> float:
    """Rosenbrock on [-2, 2]^2 mapped to the unit box; optimum 0 at (0.75, 0.75)."""
    x, y = 4.0 * u - 2.0
    return -float((1.0 - x) ** 2 + 100.0 * (y - x**2) ** 2)


def parabola(x: np.ndarray) -> float:
    return -float((x[0] - 0.37) ** 2)


def _prefix_maxima_ok(run) -> bool:
    scores = [t.score for t in run.history]
    return run.best_score == max(scores) and list(np.maximum.accumulate(scores))[-1] == run.best_score


def test_cmaes_population_size():
    """Test lambda = 4 + floor(3 ln d) and the options handed to pycma."""
    assert population_size(2) == 6
    assert population_size(3) == 7
    assert population_size(7) == 9

    options = cma_options(7, seed=0)
    assert options["popsize"] == 9
    assert options["seed"] != 0
    assert options["bounds"] == [0.0, 1.0]


def test_cmaes_sphere_history():
    """Test the history of a run on a shifted sphere in three dimensions."""
    budget = SearchBudget(m0=39, d=3)
    run = cmaes_maximize(Objective(sphere, 3), 3, budget, seed=1)

    assert len(run.history) == budget.trials()
    assert run.best_score >= -1e-3
    assert _prefix_maxima_ok(run)


def test_cmaes_sphere_most_seeds():
    """Test that 200 evaluations get within 1e-4 of the optimum for 9 of 10 seeds."""
    budget = SearchBudget(m0=39, d=3)
    solved = sum(
        cmaes_maximize(Objective(sphere, 3), 3, budget, seed=seed).best_score >= -1e-4
        for seed in range(10)
    )

    assert solved >= 9


def test_cmaes_rosenbrock_most_seeds():
    """Test that the banana valley is solved for at least 8 of 10 seeds."""
    budget = SearchBudget(m0=3000, d=1)
    solved = sum(
        cmaes_maximize(Objective(rosenbrock_in_box, 2), 2, budget, seed=seed).best_score >= -1e-2
        for seed in range(10)
    )

    assert solved >= 8


def test_cmaes_history_matches_budget_exactly():
    """Test that a partial last generation still stops at the budget."""
    budget = SearchBudget(m0=5, d=3)
    obj = Objective(sphere, 3)

    run = cmaes_maximize(obj, 3, budget, seed=0)

    assert budget.trials() == 25
    assert len(run.history) == 25
    assert obj.evaluations == 25
    assert [t.index for t in run.history] == list(range(25))


def test_cmaes_candidates_stay_in_box():
    """Test clamping with an optimum on the boundary."""
    run = cmaes_maximize(
        Objective(lambda x: float(np.sum(x)), 3), 3, SearchBudget(m0=20, d=3), seed=4, sigma0=0.8
    )

    for trial in run.history:
        assert all(0.0 <= v <= 1.0 for v in trial.candidate)
    assert run.best_score == pytest.approx(3.0, abs=0.05)


def test_cmaes_init_is_first_trial():
    """Test that an initial solution is evaluated as trial 0."""
    init = [0.7, 0.7, 0.7]
    run = cmaes_maximize(Objective(sphere, 3), 3, SearchBudget(m0=5, d=3), init=init, seed=2)

    assert run.history[0].candidate == tuple(init)
    assert run.best_score == 0.0
    assert run.init == tuple(init)


def test_cmaes_constant_objective():
    """Test a flat landscape."""
    run = cmaes_maximize(Objective(lambda x: 1.5, 2), 2, SearchBudget(m0=5, d=2), seed=0)

    assert run.best_score == 1.5


def test_cmaes_is_deterministic():
    """Test that the same seed reproduces the history."""
    budget = SearchBudget(m0=5, d=3)
    first = cmaes_maximize(Objective(sphere, 3), 3, budget, seed=11)
    second = cmaes_maximize(Objective(sphere, 3), 3, budget, seed=11)

    assert first.history == second.history


def test_cmaes_argument_errors():
    """Test dimension and budget checks."""
    with pytest.raises(OptimizerSelectionError, match="TPE"):
        cmaes_maximize(Objective(parabola, 1), 1, SearchBudget(m0=20, d=1))
    with pytest.raises(ArgumentError, match="generation"):
        cmaes_maximize(Objective(sphere, 3), 3, SearchBudget(m0=1, d=3))
    with pytest.raises(ArgumentError, match="length"):
        cmaes_maximize(Objective(sphere, 3), 3, SearchBudget(m0=5, d=3), init=[0.5, 0.5])


def test_tpe_schedule_constants():
    """Test start-up length and good-group size."""
    assert n_startup_trials(50) == 10
    assert n_startup_trials(5) == 2
    assert n_good(9) == 1
    assert n_good(11) == 2
    assert n_good(1000) == 25


def test_tpe_finds_parabola_peak():
    """Test recovery of a known one-dimensional optimum."""
    run = tpe_maximize(Objective(parabola, 1), SearchBudget(m0=50, d=1), seed=0)

    assert len(run.history) == 50
    assert abs(run.best_candidate[0] - 0.37) <= 0.05
    assert _prefix_maxima_ok(run)


def test_tpe_parabola_most_seeds():
    """Test |x - 0.37| <= 0.05 after 50 trials for 9 of 10 seeds."""
    budget = SearchBudget(m0=50, d=1)
    hits = sum(
        abs(tpe_maximize(Objective(parabola, 1), budget, seed=seed).best_candidate[0] - 0.37) <= 0.05
        for seed in range(10)
    )

    assert hits >= 9


def test_parzen_density_three_points():
    """Test the kernel density against a hand-computed value."""
    points = np.array([0.2, 0.4, 0.6])
    density = ParzenEstimator(points)

    # std (ddof=1) is 0.2, so h = 0.2 * 3^(-1/5)
    h = 0.2 * 3 ** (-0.2)
    assert density.bandwidth == pytest.approx(h)

    def kernel(u: float) -> float:
        return math.exp(-0.5 * (u / h) ** 2) / (h * math.sqrt(2 * math.pi))

    expected = (kernel(0.0) + 2 * kernel(0.2)) / 3
    assert math.exp(density.log_pdf(np.array([0.4]))[0]) == pytest.approx(expected)

    # Far from every point the density vanishes rather than falling to a floor
    assert density.log_pdf(np.array([5.0]))[0] < -100


def test_parzen_single_point_uses_minimum_bandwidth():
    """Test the 1e-3 bandwidth floor and clamped samples."""
    density = ParzenEstimator(np.array([0.999]))

    assert density.bandwidth == 1e-3
    draws = density.sample(np.random.default_rng(0), 100)
    assert np.all((draws >= 0.0) & (draws <= 1.0))
    assert np.all(np.abs(draws - 0.999) < 0.01)


def test_tpe_single_trial_uses_init():
    """Test that init consumes a budget of one."""
    run = tpe_maximize(Objective(parabola, 1), SearchBudget(m0=1, d=1), init=0.5, seed=0)

    assert len(run.history) == 1
    assert run.history[0].candidate == (0.5,)
    assert run.history[0].score == pytest.approx(parabola(np.array([0.5])))


def test_tpe_is_deterministic_and_bounded():
    """Test seeded histories and the unit interval."""
    budget = SearchBudget(m0=30, d=1)
    first = tpe_maximize(Objective(parabola, 1), budget, seed=9)
    second = tpe_maximize(Objective(parabola, 1), budget, seed=9)

    assert first.history == second.history
    assert all(0.0 <= t.candidate[0] <= 1.0 for t in first.history)


def test_tpe_rejects_multidimensional_objectives():
    """Test the d == 1 restriction."""
    with pytest.raises(OptimizerSelectionError, match="CMA-ES"):
        tpe_maximize(Objective(sphere, 3), SearchBudget(m0=20, d=3))


def test_trace_csv_round_trip(tmp_path):
    """Test that traces of different widths share one file."""
    traces = [
        ("e1", [TrialRecord(index=0, candidate=(0.25,), score=3.5, stage="stage1:D")]),
        (
            "e2",
            [
                TrialRecord(index=0, candidate=(0.1, 0.2, 0.3), score=-1.0, stage="iter:C"),
                TrialRecord(index=1, candidate=(0.4, 0.5, 0.6), score=2.0, stage="iter:C"),
            ],
        ),
    ]
    path = tmp_path / "trace.csv"

    assert write_trace_csv(path, traces) == 3
    rows = read_trace_csv(path)

    assert [entry for entry, _ in rows] == ["e1", "e2", "e2"]
    assert rows[0][1] == traces[0][1][0]
    assert rows[2][1] == traces[1][1][1]
    assert path.read_text().splitlines()[0] == "entry_id,stage,trial_index,x0,x1,x2,score"

"""Shared fixtures: the expensive seeded runs are session-scoped so the
acceptance criteria that read the same tables reuse one computation."""

from __future__ import annotations

import pytest

from bloomclock import (
    ExperimentConfig,
    SweepSpec,
    probability_curve,
    run,
    run_experiment,
    run_sweep,
)

SEEDS3 = (1, 2, 3)
SEEDS20 = tuple(range(1, 21))


@pytest.fixture(scope="session")
def grid200():
    """Full n=200 sweep behind Tables 2-4: pr_i x m x k, three seeds per cell."""
    spec = SweepSpec(
        topology="complete",
        n_values=(200,),
        m_values=(20, 40, 60),
        k_values=(2, 3, 4),
        pr_i_values=(0.0, 0.90, 0.95, 1.0),
        seeds=SEEDS3,
    )
    return run_sweep(spec)


@pytest.fixture(scope="session")
def complete50():
    return run_experiment(ExperimentConfig("complete", n=50, m=5, k=2), SEEDS20)


@pytest.fixture(scope="session")
def scalar50():
    return run_experiment(ExperimentConfig("complete", n=50, m=1, k=1), SEEDS20)


@pytest.fixture(scope="session")
def complete100():
    return run_experiment(ExperimentConfig("complete", n=100, m=10, k=2), SEEDS3)


@pytest.fixture(scope="session")
def complete100_pri95():
    return run_experiment(ExperimentConfig("complete", n=100, m=10, k=2, pr_i=0.95), SEEDS3)


@pytest.fixture(scope="session")
def star50_m3():
    return run_experiment(ExperimentConfig("star", n=50, m=3, k=2), SEEDS3)


@pytest.fixture(scope="session")
def star100_m5():
    return run_experiment(ExperimentConfig("star", n=100, m=5, k=2), SEEDS3)


@pytest.fixture(scope="session")
def star100_m10():
    return run_experiment(ExperimentConfig("star", n=100, m=10, k=2), SEEDS3)


@pytest.fixture(scope="session")
def broadcast100_m5():
    return run_experiment(ExperimentConfig("broadcast", n=100, m=5, k=2), SEEDS3)


@pytest.fixture(scope="session")
def broadcast100_m10():
    return run_experiment(ExperimentConfig("broadcast", n=100, m=10, k=2), SEEDS3)


@pytest.fixture(scope="session")
def trend_curves():
    """Per-pair probability curves behind the trend checks, one per seed.

    The window extends to gsn 5000 so the flattening of pr_p can be judged
    past the 4500 mark the placement checks use.
    """
    curves = []
    for seed in SEEDS3:
        log = run(ExperimentConfig("complete", n=100, m=10, k=2, pr_i=0.0, seed=seed))
        curves.append(probability_curve(log, 1000, 1001, 5000))
    return curves

"""Desk-scale training comparisons; run with ``pytest --runslow``.

The depth-3 W-cycle runs are shared by both comparisons, so the whole
module trains 15 networks.
"""
import math
import statistics

import pytest

from msgprol.msann.ledger import cost_to_fraction, mse_at_cost
from msgprol.msann.training import run_training
from msgprol.schemas.training import TrainConfig

SEEDS = range(5)


def benchmark_config(**overrides) -> TrainConfig:
    values = dict(
        layers={"sizes": [256, 64, 32, 64, 256]},
        task={"kind": "synthetic", "objects": 1, "noise_p": 0.05},
        gamma=2,
        k=4,
        batch_size=32,
        learning_rate=0.0005,
        validation_size=64,
        checkpoint=False,
    )
    values.update(overrides)
    return TrainConfig(**values)


def tenth_cost(ledger) -> float:
    reached = cost_to_fraction(ledger, 0.1)
    return float(reached) if reached is not None else float("inf")


def train_ledgers(**overrides) -> list:
    return [run_training(benchmark_config(seed=seed, **overrides)).ledger for seed in SEEDS]


@pytest.fixture(scope="module")
def multiscale_ledgers():
    """Depth-3 W-cycles with pair aggregation, about 208k cost units each."""
    return train_ledgers(levels=3, cycles=300, p_strategy="local-1d")


@pytest.mark.slow
def test_multiscale_reaches_tenth_error_cheaper(multiscale_ledgers):
    """Plain training gets 3000 cycles, about 384k cost units."""
    default_ledgers = train_ledgers(levels=0, cycles=3000)
    default_costs = [tenth_cost(ledger) for ledger in default_ledgers]
    multiscale_costs = [tenth_cost(ledger) for ledger in multiscale_ledgers]
    assert math.isfinite(statistics.median(multiscale_costs))
    assert statistics.median(multiscale_costs) <= 0.5 * statistics.median(default_costs)

    common = [min(d.total, m.total) for d, m in zip(default_ledgers, multiscale_ledgers)]
    default_mse = [mse_at_cost(ledger, cost) for ledger, cost in zip(default_ledgers, common)]
    multiscale_mse = [mse_at_cost(ledger, cost) for ledger, cost in zip(multiscale_ledgers, common)]
    assert statistics.median(multiscale_mse) <= statistics.median(default_mse)


@pytest.mark.slow
def test_local_maps_beat_shuffled_maps(multiscale_ledgers):
    shuffled_ledgers = train_ledgers(levels=3, cycles=300, p_strategy="shuffled-1d")
    local = [tenth_cost(ledger) for ledger in multiscale_ledgers]
    shuffled = [tenth_cost(ledger) for ledger in shuffled_ledgers]
    assert math.isfinite(statistics.median(local))
    assert statistics.median(local) < statistics.median(shuffled)

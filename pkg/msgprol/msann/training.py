"""Training schedules for a multiscale hierarchy.

Every batch runs backprop on the composite network, restricts the fine
gradients to the level being trained and applies RMSProp there. The
``cycle`` schedule visits levels recursively (train, recurse gamma times,
train again); ``simultaneous`` updates every level on every batch.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from msgprol.core.errors import ConfigurationError
from msgprol.core.logging import kv
from msgprol.data.streams import SyntheticStream, make_stream
from msgprol.data.synthetic import Batch, sample_batch
from msgprol.msann.hierarchy import MsannHierarchy, PStrategyFactory, build_hierarchy
from msgprol.msann.ledger import CostLedger, batch_cost, cost_to_fraction
from msgprol.msann.network import backprop_fine, reconstruction_error
from msgprol.msann.operators import restrict_gradient
from msgprol.schemas.reports import TrainSummary
from msgprol.schemas.training import ScheduleEnum, TrainConfig

logger = logging.getLogger(__name__)

SIMULTANEOUS_LEVEL = -1


class RMSProp:
    """Per-tensor RMSProp state for one level."""

    def __init__(self, shapes: Sequence[tuple], learning_rate: float, decay: float = 0.9, eps: float = 1e-8):
        self.learning_rate = learning_rate
        self.decay = decay
        self.eps = eps
        self.ms = [np.zeros(shape) for shape in shapes]

    def step(self, params: List[np.ndarray], grads: Sequence[np.ndarray]) -> None:
        """Updates ``params`` in place."""
        for theta, g, ms in zip(params, grads, self.ms):
            ms *= self.decay
            ms += (1.0 - self.decay) * g * g
            theta -= self.learning_rate * g / np.sqrt(ms + self.eps)


# --- Schedule arithmetic ---

def visit_sequence(depth: int, gamma: int, level: int = 0) -> List[int]:
    """Levels visited by one cycle started at ``level``."""
    visits = [level]
    if level < depth:
        for _ in range(gamma):
            visits += visit_sequence(depth, gamma, level + 1)
            visits.append(level)
    return visits


def cost_of_schedule(cfg: TrainConfig, sizes: Sequence[int]) -> Fraction:
    """Exact cost of one cycle given per-level parameter counts |M_l|."""
    if cfg.levels >= len(sizes):
        raise ConfigurationError(f"Depth {cfg.levels} needs {cfg.levels + 1} level sizes, got {len(sizes)}.")
    if ScheduleEnum(cfg.schedule) == ScheduleEnum.simultaneous:
        per_batch = sum(batch_cost(sizes[l], sizes[0], cfg.batch_size) for l in range(cfg.levels + 1))
        return per_batch * cfg.k
    return sum(
        (batch_cost(sizes[l], sizes[0], cfg.batch_size) * cfg.k for l in visit_sequence(cfg.levels, cfg.gamma)),
        Fraction(0),
    )


# --- Training session ---

@dataclass
class TrainingResult:
    hierarchy: MsannHierarchy
    ledger: CostLedger
    visits: List[int]
    summary: TrainSummary


class MsannTrainer:
    def __init__(self, h: MsannHierarchy, cfg: TrainConfig, stream, validation: Batch):
        if stream.width != h.levels[0].widths[0]:
            raise ConfigurationError(f"Data width {stream.width} does not match input layer width {h.levels[0].widths[0]}.")
        if cfg.levels != h.depth:
            raise ConfigurationError(f"Config depth {cfg.levels} differs from hierarchy depth {h.depth}.")
        self.h = h
        self.cfg = cfg
        self.stream = stream
        self.validation = validation
        self.sizes = h.sizes()
        self.optimizers = [
            RMSProp([t.shape for t in lp.thetas], cfg.learning_rate, cfg.rmsprop_decay, cfg.rmsprop_eps)
            for lp in h.levels
        ]
        self.visits: List[int] = []
        self.ledger = CostLedger()
        self.ledger.record_initial(self.validation_error())

    def validation_error(self) -> float:
        return reconstruction_error(self.h.composite, self.validation.inputs, self.validation.targets)

    def _fine_gradients(self) -> List[np.ndarray]:
        batch = self.stream.next_batch(self.cfg.batch_size)
        return backprop_fine(self.h.composite, batch.inputs, batch.targets)

    def _update_level(self, level: int, fine: Sequence[np.ndarray]) -> None:
        grads = [restrict_gradient(g, self.h.chain, level, j) for j, g in enumerate(fine)]
        self.optimizers[level].step(self.h.levels[level].thetas, grads)

    def train_level(self, level: int, k: Optional[int] = None) -> None:
        """k batches of RMSProp on one level's parameters."""
        if not 0 <= level <= self.h.depth:
            raise ConfigurationError(f"Level {level} is outside [0, {self.h.depth}].")
        k = self.cfg.k if k is None else k
        self.visits.append(level)
        increment = batch_cost(self.sizes[level], self.sizes[0], self.cfg.batch_size)
        for _ in range(k):
            self._update_level(level, self._fine_gradients())
            self.h.refresh(level)
            sample = self.ledger.record(level, increment, self.validation_error())
            logger.debug(kv(event="train.batch", t=sample.t, level=level, cost=float(sample.cost), mse=sample.mse))

    def msann_cycle(self, level: int = 0) -> None:
        if level > self.cfg.levels:
            raise ConfigurationError(f"Cycle level {level} exceeds depth {self.cfg.levels}.")
        self.train_level(level)
        if level < self.cfg.levels:
            for _ in range(self.cfg.gamma):
                self.msann_cycle(level + 1)
                self.train_level(level)

    def simultaneous_cycle(self) -> None:
        """k batches, each updating every level from the same fine gradients."""
        increment = sum(batch_cost(s, self.sizes[0], self.cfg.batch_size) for s in self.sizes)
        self.visits.append(SIMULTANEOUS_LEVEL)
        for _ in range(self.cfg.k):
            fine = self._fine_gradients()
            for level in range(self.h.depth + 1):
                self._update_level(level, fine)
            self.h.refresh()
            self.ledger.record(SIMULTANEOUS_LEVEL, increment, self.validation_error())

    def run(self, cycles: Optional[int] = None) -> CostLedger:
        cycles = self.cfg.cycles if cycles is None else cycles
        simultaneous = ScheduleEnum(self.cfg.schedule) == ScheduleEnum.simultaneous
        for c in range(cycles):
            if simultaneous:
                self.simultaneous_cycle()
            else:
                self.msann_cycle(0)
            logger.info(kv(event="train.cycle_done", cycle=c + 1, cost=float(self.ledger.total), mse=self.ledger.final_mse))
        return self.ledger

    def summary(self, cycles: int) -> TrainSummary:
        tenth = cost_to_fraction(self.ledger, 0.1)
        return TrainSummary(
            final_mse=self.ledger.final_mse,
            initial_mse=self.ledger.initial_mse,
            cost_to_tenth_initial_mse=float(tenth) if tenth is not None else None,
            total_cost=float(self.ledger.total),
            batches=len(self.ledger.samples) - 1,
            cycles=cycles,
            levels=self.cfg.levels,
            gamma=self.cfg.gamma,
            k=self.cfg.k,
            schedule=self.cfg.schedule,
            p_strategy=self.cfg.p_strategy,
            seed=self.cfg.seed,
        )


def validation_batch(stream, size: int, rng: np.random.Generator) -> Batch:
    """Fixed batch E(t) is measured on, drawn from its own RNG stream."""
    if isinstance(stream, SyntheticStream):
        return sample_batch(stream.spec, size, rng)
    rows = rng.choice(stream.data.shape[0], size=min(size, stream.data.shape[0]), replace=False)
    x = stream.data[np.sort(rows)]
    return Batch(x, x.copy())


def run_training(cfg: TrainConfig, data_dir: Optional[Path] = None) -> TrainingResult:
    """Builds the hierarchy and data stream from ``cfg`` and trains for ``cfg.cycles`` cycles."""
    init_seq, p_seq, data_seq, val_seq = np.random.SeedSequence(cfg.seed).spawn(4)
    factory = PStrategyFactory(cfg.p_strategy, cfg.grid_mode, np.random.default_rng(p_seq), cfg.optimized_s)
    h = build_hierarchy(cfg.layers.sizes, cfg.levels, factory, cfg.grid_mode, np.random.default_rng(init_seq))

    stream = make_stream(cfg.task, cfg.layers.sizes[0], np.random.default_rng(data_seq), data_dir)
    validation = validation_batch(stream, cfg.validation_size, np.random.default_rng(val_seq))

    trainer = MsannTrainer(h, cfg, stream, validation)
    trainer.run()
    summary = trainer.summary(cfg.cycles)
    logger.info(kv(event="train.done", final_mse=summary.final_mse, cost_to_tenth=summary.cost_to_tenth_initial_mse))
    return TrainingResult(hierarchy=h, ledger=trainer.ledger, visits=trainer.visits, summary=summary)

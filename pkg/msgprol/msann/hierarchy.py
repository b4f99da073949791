"""Leveled parameter hierarchy of a multiscale autoencoder.

Level 0 is the network actually evaluated; level l has every layer width
divided by 2^l (1D tasks) or 4^l (2D tasks). The network that is trained
and evaluated uses the composite parameters

    Theta_j = theta^(0)_j + sum_{l >= 1} Pro_{l -> 0}(theta^(l)_j).
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from msgprol.core.errors import ConfigurationError, ShapeError
from msgprol.core.logging import kv
from msgprol.graph.core import make_cycle
from msgprol.graph.prolongation import (
    ProlongationProblem,
    closed_form_2d,
    closed_form_local_1d,
    optimize,
    random_orthogonal,
)
from msgprol.msann.operators import ProResChain, is_weight_index
from msgprol.schemas.prolongation import OptimizerConfig
from msgprol.schemas.training import GridModeEnum, PStrategyEnum

logger = logging.getLogger(__name__)


# --- Domain types ---

@dataclass
class LevelParams:
    level: int
    widths: List[int]
    thetas: List[np.ndarray]

    def __post_init__(self):
        expected = parameter_shapes(self.widths)
        if len(self.thetas) != len(expected):
            raise ShapeError(f"Level {self.level} needs {len(expected)} tensors, got {len(self.thetas)}.")
        for j, (theta, shape) in enumerate(zip(self.thetas, expected)):
            if theta.shape != shape:
                raise ShapeError(f"Level {self.level} tensor {j} has shape {theta.shape}, widths need {shape}.")

    @property
    def size(self) -> int:
        return parameter_count(self.widths)


class MsannHierarchy:
    """Levels, their Pro/Res chain and the cached composite parameters."""

    def __init__(self, levels: Sequence[LevelParams], chain: ProResChain):
        self.levels: List[LevelParams] = list(levels)
        self.chain = chain
        if len(self.levels) != chain.depth + 1:
            raise ConfigurationError(f"{len(self.levels)} levels do not match a chain of depth {chain.depth}.")
        for lp, widths in zip(self.levels, chain.widths):
            if lp.widths != widths:
                raise ConfigurationError(f"Level {lp.level} widths {lp.widths} differ from chain widths {widths}.")
        self.composite: List[np.ndarray] = []
        # _prolonged[l][j] = Pro_{l -> 0}(theta^(l)_j)
        self._prolonged: List[List[np.ndarray]] = [[] for _ in self.levels]
        self.refresh()

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def n_params(self) -> int:
        return len(self.levels[0].thetas)

    def refresh(self, level: Optional[int] = None) -> None:
        """Recomputes the composite after ``level`` (or every level) changed."""
        changed = range(len(self.levels)) if level is None else [level]
        for l in changed:
            self._prolonged[l] = [self.chain.pro(t, l, j) for j, t in enumerate(self.levels[l].thetas)]
        composite = []
        for j in range(self.n_params):
            total = np.array(self._prolonged[0][j], dtype=float)
            for l in range(1, len(self.levels)):
                total += self._prolonged[l][j]
            composite.append(total)
        self.composite = composite

    def sizes(self) -> List[int]:
        return [lp.size for lp in self.levels]


# --- Shapes and sizes ---

def parameter_shapes(widths: Sequence[int]) -> List[Tuple[int, ...]]:
    shapes: List[Tuple[int, ...]] = []
    for fan_in, fan_out in zip(widths, widths[1:]):
        shapes.append((fan_in, fan_out))
        shapes.append((fan_out,))
    return shapes


def parameter_count(widths: Sequence[int]) -> int:
    """|M_l|: number of scalar parameters of a network with these widths."""
    return sum(math.prod(shape) for shape in parameter_shapes(widths))


def level_widths(widths: Sequence[int], depth: int, grid_mode: GridModeEnum) -> List[List[int]]:
    factor = 4 if GridModeEnum(grid_mode) == GridModeEnum.two_d else 2
    levels = [list(widths)]
    for level in range(1, depth + 1):
        divisor = factor ** level
        bad = [w for w in widths if w % divisor]
        if bad:
            raise ConfigurationError(
                f"Layer widths {list(widths)} cannot be coarsened to level {level}: {bad} not divisible by {divisor}."
            )
        levels.append([w // divisor for w in widths])
    return levels


# --- Composite assembly ---

def assemble_composite(h: MsannHierarchy, j: int, telescoped: bool = False) -> np.ndarray:
    """Theta_j from all levels.

    The default sums Pro_{l -> 0}(theta^(l)_j) through the chain's cached
    products; ``telescoped`` instead nests single-level Pro steps from the
    coarsest level down.
    """
    if telescoped:
        acc = np.array(h.levels[-1].thetas[j], dtype=float)
        for level in range(h.depth, 0, -1):
            acc = h.chain.pro_step(acc, level, j) + h.levels[level - 1].thetas[j]
        return acc
    total = np.array(h.levels[0].thetas[j], dtype=float)
    for level in range(1, h.depth + 1):
        total += h.chain.pro(h.levels[level].thetas[j], level, j)
    return total


# --- Prolongation strategies per layer ---

LayerMapFactory = Callable[[int, int], np.ndarray]


def _local_2d(n_fine: int, n_coarse: int) -> np.ndarray:
    side = math.isqrt(n_fine)
    if side * side == n_fine and side % 2 == 0:
        return closed_form_2d(side // 2)
    # Not a square grid of even side: two pair-aggregation steps
    return closed_form_local_1d(n_fine // 2) @ closed_form_local_1d(n_coarse)


class PStrategyFactory:
    """Builds the map from a coarse layer (n_coarse) to its finer copy (n_fine)."""

    def __init__(self, strategy: PStrategyEnum, grid_mode: GridModeEnum, rng: np.random.Generator,
                 optimized_s: float = 0.5, optimizer: Optional[OptimizerConfig] = None):
        self.strategy = PStrategyEnum(strategy)
        self.grid_mode = GridModeEnum(grid_mode)
        self.rng = rng
        self.optimized_s = optimized_s
        self.optimizer = optimizer or OptimizerConfig(max_iters=500)
        self._cycle_maps: Dict[int, np.ndarray] = {}

    def __call__(self, n_fine: int, n_coarse: int) -> np.ndarray:
        ratio = 4 if self.grid_mode == GridModeEnum.two_d else 2
        if n_fine != ratio * n_coarse:
            raise ConfigurationError(f"Cannot map width {n_coarse} to {n_fine} in {self.grid_mode.value} mode.")

        if self.strategy == PStrategyEnum.local_1d:
            return closed_form_local_1d(n_coarse)
        if self.strategy == PStrategyEnum.shuffled_1d:
            return closed_form_local_1d(n_coarse)[self.rng.permutation(n_fine)]
        if self.strategy == PStrategyEnum.local_2d:
            return _local_2d(n_fine, n_coarse)
        if self.strategy == PStrategyEnum.shuffled_2d:
            return _local_2d(n_fine, n_coarse)[self.rng.permutation(n_fine)]
        if self.strategy == PStrategyEnum.random_orthogonal:
            return random_orthogonal(n_fine, n_coarse, self.rng)
        return self._optimized(n_fine, n_coarse)

    def _optimized_cycle(self, n: int) -> np.ndarray:
        """Optimized C_n -> C_2n map started from pair aggregation."""
        if n not in self._cycle_maps:
            if n < 3:
                logger.debug(kv(event="p_strategy.local_fallback", n=n))
                self._cycle_maps[n] = closed_form_local_1d(n)
            else:
                prob = ProlongationProblem(make_cycle(n), make_cycle(2 * n), s=self.optimized_s)
                self._cycle_maps[n] = optimize(prob, closed_form_local_1d(n), self.optimizer).p
        return self._cycle_maps[n]

    def _optimized(self, n_fine: int, n_coarse: int) -> np.ndarray:
        if self.grid_mode == GridModeEnum.one_d:
            return self._optimized_cycle(n_coarse)
        side = math.isqrt(n_fine)
        if side * side == n_fine and side % 2 == 0:
            factor = self._optimized_cycle(side // 2)
            return np.kron(factor, factor)
        return self._optimized_cycle(n_fine // 2) @ self._optimized_cycle(n_coarse)


# --- Construction ---

def glorot_uniform(fan_in: int, fan_out: int, rng: np.random.Generator) -> np.ndarray:
    r = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-r, r, size=(fan_in, fan_out))


def init_level(widths: Sequence[int], level: int, rng: Optional[np.random.Generator] = None) -> LevelParams:
    """Level 0 gets Glorot-uniform weights and zero biases; coarser levels start at zero."""
    thetas: List[np.ndarray] = []
    for j, shape in enumerate(parameter_shapes(widths)):
        if level == 0 and is_weight_index(j):
            thetas.append(glorot_uniform(shape[0], shape[1], rng))
        else:
            thetas.append(np.zeros(shape))
    return LevelParams(level=level, widths=list(widths), thetas=thetas)


def build_chain(widths: List[List[int]], factory: LayerMapFactory) -> ProResChain:
    steps = []
    for level in range(1, len(widths)):
        steps.append([factory(fine, coarse) for fine, coarse in zip(widths[level - 1], widths[level])])
    return ProResChain(widths, steps)


def build_hierarchy(widths: Sequence[int], depth: int, factory: LayerMapFactory, grid_mode: GridModeEnum,
                    rng: np.random.Generator) -> MsannHierarchy:
    all_widths = level_widths(widths, depth, grid_mode)
    chain = build_chain(all_widths, factory)
    levels = [init_level(all_widths[0], 0, rng)]
    levels += [init_level(all_widths[level], level) for level in range(1, depth + 1)]
    h = MsannHierarchy(levels, chain)
    logger.info(kv(event="hierarchy.built", depth=depth, sizes=h.sizes()))
    return h

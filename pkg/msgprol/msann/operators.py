"""Pro/Res operators on network parameters.

Weights have shape (fan_in, fan_out). A weight between layers i and i+1
is prolonged with the maps of both layers, a bias attached to layer i+1
with the map of that layer only:

    Pro(W) = P_in W P_out^T        Res(W) = P_in^T W P_out
    Pro(b) = P b                   Res(b) = P^T b
"""
from typing import List, Sequence

import numpy as np

from msgprol.core.config import settings
from msgprol.core.errors import ConfigurationError, ConstraintError, ShapeError


def _check_weight(w: np.ndarray, rows: int, cols: int, what: str) -> None:
    if w.ndim != 2 or w.shape != (rows, cols):
        raise ShapeError(f"{what}: weight has shape {w.shape}, maps need {(rows, cols)}.")


def pro_weight(w: np.ndarray, pin: np.ndarray, pout: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    _check_weight(w, pin.shape[1], pout.shape[1], "pro_weight")
    return pin @ w @ pout.T


def res_weight(w: np.ndarray, pin: np.ndarray, pout: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    _check_weight(w, pin.shape[0], pout.shape[0], "res_weight")
    return pin.T @ w @ pout


def pro_bias(b: np.ndarray, p: np.ndarray) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.ndim != 1 or b.shape[0] != p.shape[1]:
        raise ShapeError(f"pro_bias: bias has shape {b.shape}, map needs ({p.shape[1]},).")
    return p @ b


def res_bias(b: np.ndarray, p: np.ndarray) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.ndim != 1 or b.shape[0] != p.shape[0]:
        raise ShapeError(f"res_bias: bias has shape {b.shape}, map needs ({p.shape[0]},).")
    return p.T @ b


def is_weight_index(j: int) -> bool:
    """Canonical order is W0, b0, W1, b1, ...; even indices are weights."""
    return j % 2 == 0


class ProResChain:
    """Per-layer prolongation maps for every level of a hierarchy.

    ``steps[l - 1][i]`` maps layer i of level l to layer i of level l - 1
    and has shape (widths[l - 1][i], widths[l][i]). Products down to
    level 0 are computed once here.
    """

    def __init__(self, widths: Sequence[Sequence[int]], steps: Sequence[Sequence[np.ndarray]]):
        self.widths: List[List[int]] = [list(w) for w in widths]
        if len(steps) != len(self.widths) - 1:
            raise ConfigurationError(f"{len(self.widths)} levels need {len(self.widths) - 1} sets of maps, got {len(steps)}.")
        n_layers = len(self.widths[0])
        self.steps: List[List[np.ndarray]] = []
        for level, maps in enumerate(steps, start=1):
            if len(maps) != n_layers:
                raise ConfigurationError(f"Level {level} has {len(maps)} maps for {n_layers} layers.")
            checked = []
            for i, p in enumerate(maps):
                p = np.asarray(p, dtype=float)
                expected = (self.widths[level - 1][i], self.widths[level][i])
                if p.shape != expected:
                    raise ConfigurationError(f"Map for layer {i} at level {level} has shape {p.shape}, widths need {expected}.")
                defect = np.linalg.norm(p.T @ p - np.eye(p.shape[1]))
                if defect >= settings.ORTHOGONALITY_TOL:
                    raise ConstraintError(f"Map for layer {i} at level {level} is not orthogonal (defect {defect:.3e}).")
                checked.append(p)
            self.steps.append(checked)

        self.composites: List[List[np.ndarray]] = [[np.eye(w) for w in self.widths[0]]]
        for level in range(1, len(self.widths)):
            previous = self.composites[-1]
            self.composites.append([previous[i] @ self.steps[level - 1][i] for i in range(n_layers)])

    @property
    def depth(self) -> int:
        return len(self.widths) - 1

    def step(self, level: int, layer: int) -> np.ndarray:
        return self.steps[level - 1][layer]

    def to_fine(self, level: int, layer: int) -> np.ndarray:
        """Composite map from ``level`` to level 0 for one layer."""
        return self.composites[level][layer]

    def _layer_maps(self, level: int, j: int, maps) -> tuple:
        layer = j // 2
        if is_weight_index(j):
            return maps(level, layer), maps(level, layer + 1)
        return (maps(level, layer + 1),)

    def pro(self, theta: np.ndarray, level: int, j: int) -> np.ndarray:
        """Pro_{level -> 0} through the cached composites."""
        if level == 0:
            return np.asarray(theta, dtype=float)
        maps = self._layer_maps(level, j, self.to_fine)
        return pro_weight(theta, *maps) if is_weight_index(j) else pro_bias(theta, *maps)

    def pro_step(self, theta: np.ndarray, level: int, j: int) -> np.ndarray:
        """Pro_{level -> level - 1}, one level at a time."""
        maps = self._layer_maps(level, j, self.step)
        return pro_weight(theta, *maps) if is_weight_index(j) else pro_bias(theta, *maps)

    def res(self, grad: np.ndarray, level: int, j: int) -> np.ndarray:
        """Res_{0 -> level}."""
        if level == 0:
            return np.asarray(grad, dtype=float)
        maps = self._layer_maps(level, j, self.to_fine)
        return res_weight(grad, *maps) if is_weight_index(j) else res_bias(grad, *maps)


def restrict_gradient(grad: np.ndarray, chain: ProResChain, level: int, j: int) -> np.ndarray:
    """dE/dtheta^(level)_j from the fine-scale gradient dE/dTheta_j."""
    return chain.res(grad, level, j)

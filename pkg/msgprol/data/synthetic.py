"""Synthetic denoising tasks: contiguous binary objects plus input-only noise.

Noise only fires pixels (0 -> 1) and only on the input copy; targets are
the clean vectors.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from msgprol.core.errors import ConfigurationError
from msgprol.schemas.data import SyntheticTaskSpec


@dataclass
class Batch:
    inputs: np.ndarray
    targets: np.ndarray

    def __len__(self) -> int:
        return self.inputs.shape[0]


def _rng(spec: SyntheticTaskSpec, rng: Optional[np.random.Generator]) -> np.random.Generator:
    return rng if rng is not None else np.random.default_rng(spec.seed)


def _paint(width: int, starts: np.ndarray, length: int) -> np.ndarray:
    rows = np.zeros((starts.shape[0], width))
    offsets = starts[:, :, None] + np.arange(length)[None, None, :]
    row_index = np.broadcast_to(np.arange(starts.shape[0])[:, None, None], offsets.shape)
    rows[row_index.ravel(), offsets.ravel()] = 1.0
    return rows


def add_noise(targets: np.ndarray, p: float, rng: np.random.Generator) -> np.ndarray:
    if p <= 0:
        return targets.copy()
    return np.maximum(targets, (rng.random(targets.shape) < p).astype(float))


def sample_one_object(spec: SyntheticTaskSpec, b: int, rng: Optional[np.random.Generator] = None) -> Batch:
    if spec.objects != 1:
        raise ConfigurationError(f"sample_one_object needs objects=1, got {spec.objects}.")
    rng = _rng(spec, rng)
    starts = rng.integers(0, spec.width - spec.object_length + 1, size=(b, 1))
    targets = _paint(spec.width, starts, spec.object_length)
    return Batch(add_noise(targets, spec.noise_p, rng), targets)


def sample_two_object(spec: SyntheticTaskSpec, b: int, rng: Optional[np.random.Generator] = None) -> Batch:
    """Two non-overlapping objects, uniform over ordered placements by rejection."""
    if spec.objects != 2:
        raise ConfigurationError(f"sample_two_object needs objects=2, got {spec.objects}.")
    length = spec.object_length
    if 2 * length > spec.width:
        raise ConfigurationError(f"Two objects of length {length} do not fit in width {spec.width}.")
    rng = _rng(spec, rng)
    n_starts = spec.width - length + 1
    starts = np.empty((b, 2), dtype=np.int64)
    pending = np.arange(b)
    while pending.size:
        draw = rng.integers(0, n_starts, size=(pending.size, 2))
        ok = np.abs(draw[:, 0] - draw[:, 1]) >= length
        starts[pending[ok]] = draw[ok]
        pending = pending[~ok]
    targets = _paint(spec.width, starts, length)
    return Batch(add_noise(targets, spec.noise_p, rng), targets)


def sample_batch(spec: SyntheticTaskSpec, b: int, rng: Optional[np.random.Generator] = None) -> Batch:
    if spec.objects == 1:
        return sample_one_object(spec, b, rng)
    return sample_two_object(spec, b, rng)

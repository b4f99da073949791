"""Batch sources for training runs."""
import logging
from pathlib import Path
from typing import Optional

import numpy as np

from msgprol.core.errors import ConfigurationError
from msgprol.core.logging import kv
from msgprol.data.idx import load_idx
from msgprol.data.synthetic import Batch, sample_batch
from msgprol.schemas.data import SyntheticTaskSpec
from msgprol.schemas.training import TaskKindEnum, TaskSpec

logger = logging.getLogger(__name__)


class SyntheticStream:
    """Draws a fresh batch from the generator on every call."""

    def __init__(self, spec: SyntheticTaskSpec, rng: np.random.Generator):
        self.spec = spec
        self.rng = rng

    @property
    def width(self) -> int:
        return self.spec.width

    def next_batch(self, b: int) -> Batch:
        return sample_batch(self.spec, b, self.rng)


def pad_images(images: np.ndarray, side: int = 32) -> np.ndarray:
    """Zero-pads (N, h, w) images centrally to (N, side, side)."""
    n, h, w = images.shape
    if h > side or w > side:
        raise ConfigurationError(f"Cannot pad {h}x{w} images to {side}x{side}.")
    top, left = (side - h) // 2, (side - w) // 2
    padded = np.zeros((n, side, side))
    padded[:, top:top + h, left:left + w] = images
    return padded


class ArrayStream:
    """Shuffled-epoch batches over a fixed array of flattened samples (autoencoding: targets = inputs)."""

    def __init__(self, data: np.ndarray, rng: np.random.Generator):
        if data.ndim != 2 or data.shape[0] == 0:
            raise ConfigurationError(f"Dataset must be a non-empty (N, width) array, got shape {data.shape}.")
        self.data = data
        self.rng = rng
        self.epoch = 0
        self._order = rng.permutation(data.shape[0])
        self._pos = 0

    @property
    def width(self) -> int:
        return self.data.shape[1]

    def next_batch(self, b: int) -> Batch:
        rows = []
        while len(rows) < b:
            if self._pos == len(self._order):
                self.epoch += 1
                self._order = self.rng.permutation(self.data.shape[0])
                self._pos = 0
            take = min(b - len(rows), len(self._order) - self._pos)
            rows.extend(self._order[self._pos:self._pos + take])
            self._pos += take
        x = self.data[np.asarray(rows)]
        return Batch(x, x.copy())


def load_mnist_images(path: Path, pad_to_32: bool = True) -> np.ndarray:
    images = load_idx(path)
    if images.ndim != 3:
        raise ConfigurationError(f"'{path}' is not an image file (dimensions {images.shape}).")
    if pad_to_32:
        images = pad_images(images, 32)
    logger.info(kv(event="mnist.loaded", path=path, images=images.shape[0]))
    return images.reshape(images.shape[0], -1)


def make_stream(task: TaskSpec, width: int, rng: np.random.Generator, data_dir: Optional[Path] = None):
    """Stream for a training task; MNIST files are resolved under ``data_dir``."""
    if TaskKindEnum(task.kind) == TaskKindEnum.synthetic:
        spec = SyntheticTaskSpec(
            width=width, objects=task.objects, object_length=task.object_length, noise_p=task.noise_p,
        )
        return SyntheticStream(spec, rng)
    data = load_mnist_images(Path(data_dir or ".") / task.images_file, task.pad_to_32)
    if data.shape[1] != width:
        raise ConfigurationError(f"Images have {data.shape[1]} pixels but the input layer has width {width}.")
    return ArrayStream(data, rng)

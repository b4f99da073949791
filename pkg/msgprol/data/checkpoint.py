"""Hierarchy checkpoints: one matrix CSV per parameter tensor plus a JSON manifest."""
import json
import logging
from pathlib import Path
from typing import List, Union

import numpy as np
from pydantic import ValidationError

from msgprol.core.errors import DataIOError, ParseError, ShapeError
from msgprol.core.logging import kv
from msgprol.data.matrix_csv import read_matrix_csv, write_matrix_csv
from msgprol.msann.hierarchy import MsannHierarchy
from msgprol.msann.operators import is_weight_index
from msgprol.schemas.reports import CheckpointEntry, CheckpointManifest, ParamRoleEnum

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def save_checkpoint(h: MsannHierarchy, directory: Union[str, Path]) -> CheckpointManifest:
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise DataIOError(f"Could not create checkpoint directory '{directory}': {e}") from e

    entries: List[CheckpointEntry] = []
    for lp in h.levels:
        for j, theta in enumerate(lp.thetas):
            name = f"level{lp.level}_theta{j}.csv"
            write_matrix_csv(theta.reshape(1, -1) if theta.ndim == 1 else theta, directory / name)
            entries.append(CheckpointEntry(
                level=lp.level,
                index=j,
                shape=list(theta.shape),
                role=ParamRoleEnum.weight if is_weight_index(j) else ParamRoleEnum.bias,
                file=name,
            ))
    manifest = CheckpointManifest(layers=h.levels[0].widths, levels=h.depth, entries=entries)
    (directory / MANIFEST_NAME).write_text(manifest.model_dump_json(indent=2))
    logger.info(kv(event="checkpoint.saved", dir=directory, tensors=len(entries)))
    return manifest


def load_checkpoint(directory: Union[str, Path]) -> List[List[np.ndarray]]:
    """Per-level parameter lists in canonical order, as saved."""
    directory = Path(directory)
    try:
        manifest = CheckpointManifest.model_validate(json.loads((directory / MANIFEST_NAME).read_text()))
    except OSError as e:
        raise DataIOError(f"Could not read checkpoint manifest in '{directory}': {e}") from e
    except (ValueError, ValidationError) as e:
        raise ParseError(f"Checkpoint manifest in '{directory}' is malformed: {e}") from e

    levels: List[List[np.ndarray]] = [[] for _ in range(manifest.levels + 1)]
    for entry in sorted(manifest.entries, key=lambda e: (e.level, e.index)):
        data = read_matrix_csv(directory / entry.file)
        if data.size != int(np.prod(entry.shape)):
            raise ShapeError(f"'{entry.file}' holds {data.size} values, manifest says shape {entry.shape}.")
        levels[entry.level].append(data.reshape(entry.shape))
    return levels


def restore_checkpoint(h: MsannHierarchy, directory: Union[str, Path]) -> MsannHierarchy:
    """Copies saved parameters into a hierarchy of the same shape and refreshes its composite."""
    saved = load_checkpoint(directory)
    if len(saved) != len(h.levels):
        raise ShapeError(f"Checkpoint has {len(saved)} levels, hierarchy has {len(h.levels)}.")
    for lp, thetas in zip(h.levels, saved):
        if [t.shape for t in thetas] != [t.shape for t in lp.thetas]:
            raise ShapeError(f"Checkpoint shapes for level {lp.level} do not match the hierarchy.")
        lp.thetas = [t.copy() for t in thetas]
    h.refresh()
    return h

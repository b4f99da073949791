"""Dense matrices as comma-separated text at full double precision."""
from pathlib import Path
from typing import Union

import numpy as np

from msgprol.core.config import settings
from msgprol.core.errors import DataIOError, ParseError


def write_matrix_csv(m: np.ndarray, path: Union[str, Path]) -> Path:
    if not str(path):
        raise DataIOError("Matrix path is empty.")
    m = np.atleast_2d(np.asarray(m, dtype=float))
    path = Path(path)
    try:
        np.savetxt(path, m, delimiter=",", fmt=f"%.{settings.CSV_SIGNIFICANT_DIGITS}g")
    except OSError as e:
        raise DataIOError(f"Could not write matrix '{path}': {e}") from e
    return path


def read_matrix_csv(path: Union[str, Path]) -> np.ndarray:
    if not str(path):
        raise DataIOError("Matrix path is empty.")
    path = Path(path)
    if not path.is_file():
        raise DataIOError(f"Matrix file '{path}' does not exist.")
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2, dtype=float)
    except OSError as e:
        raise DataIOError(f"Could not read matrix '{path}': {e}") from e
    except ValueError as e:
        raise ParseError(f"Matrix file '{path}' is malformed: {e}") from e

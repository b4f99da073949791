"""IDX container reader (the distribution format of the MNIST files).

Layout: two zero bytes, a type byte (0x08 = unsigned byte), a dimension
count byte, one big-endian uint32 per dimension, then the raw data.
"""
import struct
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from msgprol.core.errors import DataIOError, FormatError, LengthError

IDX_UBYTE = 0x08


def parse_idx_header(raw: bytes) -> Tuple[int, Tuple[int, ...], int]:
    """Returns (magic number, dimension sizes, payload offset)."""
    if len(raw) < 4:
        raise LengthError(f"IDX data is {len(raw)} bytes, shorter than its 4-byte magic number.")
    zero, data_type, ndim = struct.unpack(">HBB", raw[:4])
    if zero != 0:
        raise FormatError(f"Bad IDX magic: leading bytes are 0x{zero:04x}, expected 0x0000.")
    if data_type != IDX_UBYTE:
        raise FormatError(f"Unsupported IDX data type 0x{data_type:02x}; only 0x08 (unsigned byte) is read.")
    offset = 4 + 4 * ndim
    if len(raw) < offset:
        raise LengthError(f"IDX header declares {ndim} dimensions but the data ends at byte {len(raw)}.")
    dims = struct.unpack(f">{ndim}I", raw[4:offset])
    magic = struct.unpack(">I", raw[:4])[0]
    return magic, tuple(dims), offset


def decode_idx(raw: bytes, scale: bool = True) -> np.ndarray:
    _, dims, offset = parse_idx_header(raw)
    count = int(np.prod(dims)) if dims else 1
    if len(raw) - offset < count:
        raise LengthError(f"IDX payload holds {len(raw) - offset} bytes, dimensions {dims} need {count}.")
    data = np.frombuffer(raw, dtype=np.uint8, count=count, offset=offset).reshape(dims)
    return data / 255.0 if scale else data.astype(np.int64)


def load_idx(path: Union[str, Path], scale: bool = True) -> np.ndarray:
    """Reads an IDX file; unsigned bytes are scaled to [0, 1] by /255 unless ``scale`` is off (labels)."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise DataIOError(f"Could not read IDX file '{path}': {e}") from e
    return decode_idx(raw, scale=scale)


def encode_idx(data: np.ndarray) -> bytes:
    """Inverse of decode_idx(scale=False) for uint8 arrays; used to build fixtures."""
    data = np.asarray(data, dtype=np.uint8)
    header = struct.pack(">HBB", 0, IDX_UBYTE, data.ndim) + struct.pack(f">{data.ndim}I", *data.shape)
    return header + data.tobytes()

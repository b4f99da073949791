"""Helpers shared by the command modules."""
import json
import logging
import os
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel

from msgprol.core.config import settings
from msgprol.core.errors import DataIOError, ParseError
from msgprol.core.logging import kv
from msgprol.schemas.config import RunConfig

logger = logging.getLogger(__name__)


def get_data_dir() -> Path:
    """Dataset root; MSGPROL_DATA_DIR is read at call time so it can change between runs."""
    return Path(os.getenv("MSGPROL_DATA_DIR", settings.DATA_DIR))


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Reads and validates a JSON run config before anything is computed."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as e:
        raise DataIOError(f"Could not read config '{path}': {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"Config '{path}' is not valid JSON: {e}") from e
    return RunConfig.model_validate(raw)


def resolve_seed(cli_seed: Optional[int], config: Optional[RunConfig], section_seed: int) -> int:
    if cli_seed is not None:
        return cli_seed
    if config is not None and config.seed is not None:
        return config.seed
    return section_seed


def get_output_dir(cli_out: Optional[str], config: Optional[RunConfig] = None) -> Path:
    out = cli_out or (config.output_dir if config else None) or settings.OUTPUT_DIR
    path = Path(out)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise DataIOError(f"Could not create output directory '{path}': {e}") from e
    return path


def write_json(model: BaseModel, path: Path) -> Path:
    try:
        path.write_text(model.model_dump_json(indent=2) + "\n")
    except OSError as e:
        raise DataIOError(f"Could not write '{path}': {e}") from e
    logger.info(kv(event="file.written", path=path))
    return path

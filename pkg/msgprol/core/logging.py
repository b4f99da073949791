import logging
from typing import Optional, Union

from msgprol.core.config import settings

LOG_FORMAT = "%(asctime)s level=%(levelname)s logger=%(name)s %(message)s"


def setup_logging(level: Optional[Union[str, int]] = None) -> None:
    """Configures root logging once; later calls only adjust the level."""
    resolved = level if level is not None else settings.LOG_LEVEL
    if isinstance(resolved, str):
        resolved = logging.getLevelName(resolved.upper())
        if not isinstance(resolved, int):
            resolved = logging.INFO
    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(level=resolved, format=LOG_FORMAT)
    root.setLevel(resolved)


def kv(**fields) -> str:
    """Renders fields as a key=value message body, e.g. kv(event="x", n=3)."""
    return " ".join(f"{key}={value}" for key, value in fields.items())

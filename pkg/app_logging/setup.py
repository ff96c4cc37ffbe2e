from __future__ import annotations

import faulthandler
import logging
import sys
import traceback
from pathlib import Path

from config.paths import LOG_DIR

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_FILE_NAME = "growth_lab.log"

_log_file = None


def configure_logging(level: str | int = "INFO", log_dir: Path | None = None) -> Path:
    """File handler at ``level`` plus a stderr handler at WARNING; installs the excepthook."""
    global _log_file
    directory = Path(log_dir or LOG_DIR)
    directory.mkdir(parents=True, exist_ok=True)
    log_path = directory / LOG_FILE_NAME

    root = logging.getLogger("growth_lab")
    root.setLevel(level if isinstance(level, int) else level.upper())
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    file_handler = logging.FileHandler(log_path, encoding="utf-8")
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(file_handler)

    stderr_handler = logging.StreamHandler(sys.stderr)
    stderr_handler.setLevel(logging.WARNING)
    stderr_handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(stderr_handler)
    root.propagate = False

    if _log_file is not None:
        _log_file.close()
    _log_file = log_path.open("a", encoding="utf-8")
    logger = logging.getLogger("growth_lab.cli")

    def _sys_hook(exc_type, exc_value, exc_tb):
        logger.error("unhandled exception: %s", exc_value)
        _log_file.write("\n[sys] Unhandled exception\n")
        traceback.print_exception(exc_type, exc_value, exc_tb, file=_log_file)
        _log_file.flush()

    sys.excepthook = _sys_hook
    faulthandler.enable(_log_file)
    return log_path

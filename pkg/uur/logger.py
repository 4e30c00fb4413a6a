import logging
import os
import sys

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from utils.config import config  # noqa: E402

LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_logger(log_dir=None, level=None, console=True):
    """
    Set up logging for command-line runs.

    - Always creates a file handler writing to <log_dir>/log.txt
    - Adds a console handler unless one is already attached
    - Safe to call repeatedly: handlers are never duplicated

    Returns:
        str: Path to log file
    """
    log_dir = log_dir or config.LOG_DIR
    os.makedirs(log_dir, exist_ok=True)
    log_file = os.path.join(log_dir, "log.txt")

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, level or config.LOG_LEVEL, logging.INFO))

    formatter = logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT)

    # Check if we already added our file handler (avoid duplicates on re-entry)
    existing_file_handlers = [
        h for h in root_logger.handlers
        if isinstance(h, logging.FileHandler) and getattr(h, "baseFilename", None) == os.path.abspath(log_file)
    ]
    if not existing_file_handlers:
        file_handler = logging.FileHandler(log_file, mode="a", encoding="utf-8")
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    if console:
        existing_console_handlers = [
            h for h in root_logger.handlers
            if isinstance(h, logging.StreamHandler) and not isinstance(h, logging.FileHandler)
        ]
        if not existing_console_handlers:
            # stderr keeps stdout clean for `run --out -` and `list`
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setFormatter(formatter)
            root_logger.addHandler(console_handler)

    return log_file


def get_logger(name):
    """
    Get a logger for a specific module.

    Level and handlers come from the root logger configured by setup_logger();
    library use without setup_logger() stays silent apart from warnings.

    Args:
        name: Module name (typically use __name__)

    Returns:
        logging.Logger: Logger instance
    """
    return logging.getLogger(name)

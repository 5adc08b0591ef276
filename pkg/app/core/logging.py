
import logging
import os
import time
from contextlib import contextmanager
from logging.handlers import RotatingFileHandler
from typing import Dict, Iterator, Optional

from app.core.config import settings

def setup_logging(level: Optional[str] = None):
    log_level = (level or os.getenv("LOG_LEVEL", settings.LOG_LEVEL)).upper()
    log_file = os.getenv("LOG_FILE", settings.LOG_FILE)

    # Create logs directory if it doesn't exist
    log_dir = "logs"
    if not os.path.exists(log_dir):
        os.makedirs(log_dir)

    log_path = os.path.join(log_dir, log_file)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    # If handlers already exist, don't add duplicates
    if root_logger.handlers:
        for handler in root_logger.handlers:
            handler.setLevel(log_level)
        return

    # Console handler writes to stderr so reports on stdout stay parseable
    console_handler = logging.StreamHandler()
    console_handler.setLevel(log_level)
    console_handler.setFormatter(logging.Formatter("%(levelname)s: %(name)s: %(message)s"))
    root_logger.addHandler(console_handler)

    file_handler = RotatingFileHandler(log_path, maxBytes=10*1024*1024, backupCount=5)
    file_handler.setLevel(log_level)
    file_handler.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
    root_logger.addHandler(file_handler)

def get_logger(name: str):
    return logging.getLogger(name)

@contextmanager
def log_timing(logger: logging.Logger, stage: str, timings: Optional[Dict[str, float]] = None) -> Iterator[None]:
    """Log the start and duration of a pipeline stage, recording seconds into ``timings``."""
    logger.debug(f"Stage '{stage}' started.")
    start = time.perf_counter()
    try:
        yield
    finally:
        elapsed = time.perf_counter() - start
        if timings is not None:
            timings[stage] = elapsed
        logger.info(f"Stage '{stage}' finished in {elapsed:.3f}s.")

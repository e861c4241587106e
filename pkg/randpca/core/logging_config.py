# randpca/core/logging_config.py

import logging
import os
from logging.handlers import RotatingFileHandler

from randpca.core.config import settings


def setup_logging() -> logging.Logger:
    """
    Configures the package logger.
    Console output goes to stderr so that stdout stays machine-parseable;
    file logs rotate under settings.LOG_DIR.
    """
    logger = logging.getLogger("randpca")
    logger.setLevel(settings.LOG_LEVEL.upper())

    if logger.hasHandlers():
        logger.handlers.clear()

    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    if settings.LOG_TO_FILE:
        os.makedirs(settings.LOG_DIR, exist_ok=True)
        file_handler = RotatingFileHandler(
            os.path.join(settings.LOG_DIR, "randpca.log"),
            maxBytes=1024 * 1024 * 5,
            backupCount=5,
        )
        file_handler.setLevel(settings.LOG_LEVEL.upper())
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(settings.LOG_LEVEL.upper())
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    logger.propagate = False
    return logger


logger = setup_logging()

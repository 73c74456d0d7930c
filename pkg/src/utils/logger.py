"""
Index Policy Evaluation Toolkit

Module: logger.py

Logging setup with colour-coded console output on stderr and an optional
timestamped log file per run.
"""

import logging
import os
import sys
from datetime import datetime
from typing import Optional

from colorama import just_fix_windows_console

LOG_FORMAT = "[%(levelname)s] [%(asctime)s] [%(module)s:%(funcName)s] %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

LoggerType = logging.Logger

# Marks handlers installed by setup_logger so re-invocation can replace them
_HANDLER_TAG = "_policy_eval_handler"


class ColorFormatter(logging.Formatter):
    """
    Log formatter that wraps each message in the ANSI colour of its level.

    Attributes:
        COLORS (dict): Mapping of log levels to ANSI color codes
        RESET (str): ANSI code to reset text color
    """
    COLORS = {
        'DEBUG': '\033[94m',    # Blue
        'INFO': '\033[92m',     # Green
        'WARNING': '\033[93m',  # Yellow
        'ERROR': '\033[91m',    # Red
        'CRITICAL': '\033[95m', # Magenta
    }
    RESET = '\033[0m'

    def format(self, record):
        color = self.COLORS.get(record.levelname, self.RESET)
        message = super().format(record)
        return f"{color}{message}{self.RESET}"


def setup_logger(log_dir: Optional[str] = None, level: int = logging.INFO) -> logging.Logger:
    """
    Configure the root logger.

    A console handler writes to stderr, so command output on stdout stays
    machine-readable. When log_dir is given, every record is also written
    to log_dir/run_<timestamp>.log. Calling this again replaces the
    handlers of the previous call.

    Args:
        log_dir (str, optional): Directory for the run log file, none when omitted
        level (int): Console log level

    Returns:
        logging.Logger: The configured root logger
    """
    just_fix_windows_console()

    logger = logging.getLogger()
    logger.setLevel(logging.DEBUG)
    for handler in list(logger.handlers):
        if getattr(handler, _HANDLER_TAG, False):
            logger.removeHandler(handler)
            handler.close()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    if sys.stderr.isatty():
        console_handler.setFormatter(ColorFormatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    else:
        console_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    setattr(console_handler, _HANDLER_TAG, True)
    logger.addHandler(console_handler)

    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        timestamp = datetime.now().strftime("%Y-%m-%d_%H%M%S")
        log_path = os.path.join(log_dir, f"run_{timestamp}.log")
        file_handler = logging.FileHandler(log_path, mode='w', encoding='utf-8')
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        setattr(file_handler, _HANDLER_TAG, True)
        logger.addHandler(file_handler)

    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get the existing logger by name, or the root logger if None.

    Args:
        name (str, optional): Logger name, typically the module name

    Returns:
        logging.Logger: Logger instance
    """
    return logging.getLogger(name)

"""
logger.py

Colored terminal output and logger setup for the toolkit.

Solvers, reductions and check suites log through `get_logger`, which writes to
stderr so that every command can keep stdout for its JSON payload.

Functions:
    - color_text: Formats text with ANSI color codes for terminal display.
    - get_logger: Returns a package logger with a level-colored stderr handler.
"""

import logging
import sys

COLORS = {
    'red': '\033[91m',
    'green': '\033[92m',
    'yellow': '\033[93m',
    'blue': '\033[94m',
    'purple': '\033[95m',
    'cyan': '\033[96m',
    'white': '\033[97m',
    'orange': '\033[38;5;208m',
    'reset': '\033[0m'
}

LEVEL_COLORS = {
    logging.DEBUG: 'cyan',
    logging.INFO: 'green',
    logging.WARNING: 'yellow',
    logging.ERROR: 'red',
    logging.CRITICAL: 'purple',
}

ROOT_LOGGER = "tn_order"


def color_text(text, color):
    """
    Formats the given text with the specified color using ANSI escape codes.

    Parameters:
        text (str): The text to be formatted.
        color (str): One of the keys of `COLORS` ('red', 'green', 'yellow', 'blue',
                     'purple', 'cyan', 'white', 'orange' or 'reset').

    Returns:
        str: The formatted text with the specified color.

    Raises:
        KeyError: If the provided color is not in the predefined color list.

    Example:
        >>> print(color_text("3 suites failed", "red"))
    """
    if color not in COLORS:
        raise KeyError(f"Invalid color '{color}'. Supported colors: {', '.join(COLORS.keys())}")

    return COLORS[color] + text + COLORS['reset']


class ColorFormatter(logging.Formatter):
    """Prefixes every record with its level name, colored by severity."""

    def format(self, record):
        message = super().format(record)
        level = color_text(f"[{record.levelname.lower()}]", LEVEL_COLORS.get(record.levelno, 'white'))
        return f"{level} {record.name}: {message}"


def get_logger(name=None, level=None):
    """
    Returns a logger below the toolkit's root logger.

    The root logger gets a single stderr handler the first time this is called;
    later calls only adjust the level when one is given.

    Parameters:
        name (str, optional): Dotted suffix, e.g. "solver" gives "tn_order.solver".
        level (int or str, optional): Level applied to the root toolkit logger.

    Returns:
        logging.Logger: The configured logger.
    """
    root = logging.getLogger(ROOT_LOGGER)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(ColorFormatter())
        root.addHandler(handler)
        root.setLevel(logging.WARNING)
        root.propagate = False
    if level is not None:
        root.setLevel(level)
    return root if name is None else root.getChild(name)

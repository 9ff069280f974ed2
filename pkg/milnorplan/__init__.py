# This file makes the 'milnorplan' directory a Python package.
from .logger import logger  # noqa: F401

__version__ = "0.1.0"

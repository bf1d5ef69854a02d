"""Spectra of block-partitioned random matrices and random graph energy."""

from rmtlab._native import *  # noqa: F401,F403
from rmtlab._native import __version__  # noqa: F401

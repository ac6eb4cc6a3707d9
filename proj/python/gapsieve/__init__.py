"""Cycles of gaps in Eratosthenes sieve."""

from ._gapsieve import *  # noqa: F401,F403
from ._gapsieve import __version__  # noqa: F401

"""Collisional dynamics of two bodies on co-focal Keplerian orbits."""

from ._kepcol import *  # noqa: F401,F403
from ._kepcol import __version__  # noqa: F401

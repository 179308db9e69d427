"""Simulation laboratory for Gaussian beta-ensemble characteristic polynomials."""

from betalab._core import *  # noqa: F401,F403
from betalab._core import __version__  # noqa: F401

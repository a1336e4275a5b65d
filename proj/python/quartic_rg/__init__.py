"""Renormalized -g^2/r^4 potential with a square-well regulator."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

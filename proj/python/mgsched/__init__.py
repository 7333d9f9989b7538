"""Risk-constrained microgrid day-ahead scheduling toolkit."""

from ._mgsched import *  # noqa: F401,F403
from ._mgsched import __version__  # noqa: F401

"""Zipf rank-frequency analysis of symbolized index changes and a futures
day-trading backtest built on it. The implementation lives in the C++
extension ``zipfstrat._core``."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

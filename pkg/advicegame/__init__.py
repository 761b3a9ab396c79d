from __future__ import annotations

from advicegame._client import AdviceGame
from advicegame._version import __version__

__all__ = ["AdviceGame"]

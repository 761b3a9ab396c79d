"""Seeded random number generator for reproducible simulations."""

from __future__ import annotations

import numpy as np

from advicegame._error import AdviceGameValueError

SEED_LIMIT = 2**64


class SeededRNG:
    """Wrapper around numpy's PCG64 generator for deterministic simulation.

    The stream depends only on the seed, so equal seeds give bit-identical
    draws on every platform.
    """

    def __init__(self, seed: int) -> None:
        if not isinstance(seed, (int, np.integer)) or not 0 <= seed < SEED_LIMIT:
            raise AdviceGameValueError(
                f"seed must be an integer in [0, 2**64), got {seed!r}"
            )
        self._seed = int(seed)
        self._bit_generator = np.random.PCG64(self._seed)
        self._generator = np.random.Generator(self._bit_generator)

    @property
    def seed(self) -> int:
        return self._seed

    def random(self, size: int) -> np.ndarray:
        return self._generator.random(size)

    def integers(self, high: int, size: int) -> np.ndarray:
        return self._generator.integers(0, high, size=size)

    def raw(self, size: int) -> np.ndarray:
        """Raw 64-bit outputs of the underlying bit generator."""
        return self._bit_generator.random_raw(size)

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Box:
    """Axis-aligned box of valid values (a minimal continuous space)."""

    low: np.ndarray
    high: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "low", np.asarray(self.low, dtype=float))
        object.__setattr__(self, "high", np.asarray(self.high, dtype=float))

    @property
    def shape(self):
        return self.low.shape

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return x.shape == self.shape and bool(np.all(x >= self.low) and np.all(x <= self.high))

    def clip(self, x):
        return np.clip(x, self.low, self.high)

    def sample(self, rng):
        return rng.uniform(self.low, self.high)

    def normalize(self, x):
        """Affine map of the box onto [-1, 1]."""
        centre = 0.5 * (self.high + self.low)
        half = 0.5 * (self.high - self.low)
        return (np.asarray(x) - centre) / half

"""Free-stream wind estimate from buffered turbine measurements."""

import numpy as np


class EstimatorNotReady(RuntimeError):
    pass


def _angle_mean(phi_deg):
    """Mean of angles, unwrapped around the first one, in [0, 360)."""
    phi = np.asarray(phi_deg, dtype=float)
    ref = phi[:1]
    return (ref + np.mean((phi - ref + 180.0) % 360.0 - 180.0, axis=0)) % 360.0


def estimate_freestream(u_samples, phi_samples):
    """(u_inf, phi_inf) from (n_samples, M) buffers of speed and direction.

    Picks the turbine whose window-averaged speed is highest and returns its
    averaged speed and direction.
    """
    u = np.asarray(u_samples, dtype=float)
    phi = np.asarray(phi_samples, dtype=float)
    if u.ndim != 2 or u.shape[0] == 0:
        raise EstimatorNotReady("no buffered samples yet")
    mean_u = u.mean(axis=0)
    best = int(np.argmax(mean_u))
    return float(mean_u[best]), float(_angle_mean(phi[:, best])[0])


class FreeStreamEstimator:
    """Ring buffers of the last ``buffer_window`` (u, phi) samples per turbine."""

    def __init__(self, n_turbines, buffer_window=20):
        if buffer_window < 1:
            raise ValueError("buffer_window must be >= 1")
        self.n_turbines = n_turbines
        self.buffer_window = buffer_window
        self.reset()

    def reset(self):
        self._u = np.zeros((self.buffer_window, self.n_turbines))
        self._phi = np.zeros((self.buffer_window, self.n_turbines))
        self._count = 0

    def push(self, u, phi):
        slot = self._count % self.buffer_window
        self._u[slot] = u
        self._phi[slot] = phi
        self._count += 1

    def __len__(self):
        return min(self._count, self.buffer_window)

    def estimate(self):
        n = len(self)
        if n == 0:
            raise EstimatorNotReady("no buffered samples yet")
        if n < self.buffer_window:
            return estimate_freestream(self._u[:n], self._phi[:n])
        # oldest first, so the angle reference is deterministic
        order = (np.arange(n) + self._count) % self.buffer_window
        return estimate_freestream(self._u[order], self._phi[order])

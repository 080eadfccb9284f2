import numpy as np

MEANDER_TIMESCALE_S = 60.0


class MeanderState:
    """Lateral wake-centre offsets (m) for every ordered turbine pair.

    Mean-reverting random walk, one independent process per (source, receiver)
    pair: ``m <- m * (1 - dt / tau) + eta * sqrt(dt) * N(0, 1)`` with
    ``eta = 0.3 * TI * u``.
    """

    def __init__(self, n_turbines, timescale=MEANDER_TIMESCALE_S):
        self.timescale = timescale
        self.offsets = np.zeros((n_turbines, n_turbines))

    def update(self, rng, dt, ti_inf, u_inf):
        noise = rng.standard_normal(self.offsets.shape)
        eta = 0.3 * ti_inf * u_inf
        self.offsets = self.offsets * (1.0 - dt / self.timescale) + eta * np.sqrt(dt) * noise
        np.fill_diagonal(self.offsets, 0.0)
        return self.offsets

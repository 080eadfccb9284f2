"""Wind-rose evaluation conditions from a time series."""

from dataclasses import dataclass

import numpy as np

N_BINS = 5


@dataclass(frozen=True)
class EvalWeights:
    """Evaluation conditions (u_j, phi_j) and their weights rho_j (summing to 1)."""

    wind_speed: np.ndarray
    wind_direction: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        u, phi, w = (np.asarray(a, dtype=float) for a in (self.wind_speed, self.wind_direction, self.weights))
        if not (u.shape == phi.shape == w.shape) or u.ndim != 1 or len(u) == 0:
            raise ValueError("conditions and weights must be equal-length non-empty vectors")
        if np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be positive and sum to 1")
        for name, arr in (("wind_speed", u), ("wind_direction", phi), ("weights", w)):
            object.__setattr__(self, name, arr)

    def __len__(self):
        return len(self.weights)

    def conditions(self):
        return list(zip(self.wind_speed.tolist(), self.wind_direction.tolist()))


def _bin_edges(values, n_bins):
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return None, np.array([lo])
    edges = np.linspace(lo, hi, n_bins + 1)
    return edges, 0.5 * (edges[:-1] + edges[1:])


def _bin_index(values, edges):
    if edges is None:
        return np.zeros(len(values), dtype=int)
    # equal-width bins, the top edge belongs to the last bin
    return np.clip(np.searchsorted(edges, values, side="right") - 1, 0, len(edges) - 2)


def extract_weights(wind_speed, wind_direction=None, n_bins=N_BINS):
    """Bin (u, phi) samples into an ``n_bins x n_bins`` equal-width histogram.

    Accepts a WindSeries or two arrays. Each non-empty bin becomes a
    condition at its centre, weighted by its frequency; a dimension with a
    single value gets one bin at that value.
    """
    if wind_direction is None:
        wind_speed, wind_direction = wind_speed.u_inf, wind_speed.phi_inf
    u = np.asarray(wind_speed, dtype=float)
    phi = np.asarray(wind_direction, dtype=float)
    if u.size == 0 or u.shape != phi.shape or not np.all(np.isfinite(u) & np.isfinite(phi)):
        raise ValueError("need a non-empty series of finite speeds and directions")
    u_edges, u_centres = _bin_edges(u, n_bins)
    p_edges, p_centres = _bin_edges(phi, n_bins)
    counts = np.zeros((len(u_centres), len(p_centres)))
    np.add.at(counts, (_bin_index(u, u_edges), _bin_index(phi, p_edges)), 1.0)
    iu, ip = np.nonzero(counts)
    w = counts[iu, ip] / counts.sum()
    w = w / w.sum()
    return EvalWeights(u_centres[iu], p_centres[ip], w)

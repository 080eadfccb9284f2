"""Wind time series: file format, interpolation and a synthetic generator."""

from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy import stats

HEADER = "time_s,u_inf,phi_inf"


@dataclass(frozen=True)
class WindSeries:
    time_s: np.ndarray
    u_inf: np.ndarray
    phi_inf: np.ndarray

    def __post_init__(self):
        t, u, phi = (np.asarray(a, dtype=float) for a in (self.time_s, self.u_inf, self.phi_inf))
        if not (t.shape == u.shape == phi.shape) or t.ndim != 1 or len(t) == 0:
            raise ValueError("series columns must be equal-length 1-D arrays")
        if not np.all(np.isfinite(np.concatenate([t, u, phi]))):
            raise ValueError("series values must be finite")
        if np.any(np.diff(t) <= 0):
            raise ValueError("series time must be strictly increasing")
        for name, arr in (("time_s", t), ("u_inf", u), ("phi_inf", phi % 360.0)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "_phi_unwrapped", np.degrees(np.unwrap(np.radians(self.phi_inf))))

    def __len__(self):
        return len(self.time_s)

    def at(self, t):
        """Linearly interpolated (u, phi) at time ``t``; direction interpolates
        along the shorter arc and is held constant outside the series."""
        u = np.interp(t, self.time_s, self.u_inf)
        phi = np.interp(t, self.time_s, self._phi_unwrapped) % 360.0
        return float(u), float(phi)


def format_series(series):
    rows = [HEADER] + [f"{float(t)!r},{float(u)!r},{float(p)!r}" for t, u, p in
                       zip(series.time_s, series.u_inf, series.phi_inf)]
    return "\n".join(rows) + "\n"


def parse_series(text):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].replace(" ", "") != HEADER:
        raise ValueError(f"wind series must start with header {HEADER!r}")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]]).reshape(-1, 3)
    return WindSeries(data[:, 0], data[:, 1], data[:, 2])


def read_series(path):
    with open(path) as fh:
        return parse_series(fh.read())


def write_series(series, path):
    with open(path, "w") as fh:
        fh.write(format_series(series))


def synthetic_series(n_rows, seed, step_s=600.0, mean_speed=8.0, shape=2.0,
                     mean_direction=270.0, direction_std=5.0, correlation=0.95):
    """Autocorrelated series with Weibull speed and Normal direction marginals.

    A Gaussian AR(1) latent process is pushed through the Weibull quantile
    function (Gaussian copula), so each sample is marginally
    ``Weibull(scale=mean_speed, shape)``.
    """
    rng = np.random.default_rng(seed)
    innov = np.sqrt(1.0 - correlation**2)

    def ar1():
        z = np.empty(n_rows)
        z[0] = rng.standard_normal()
        for i in range(1, n_rows):
            z[i] = correlation * z[i - 1] + innov * rng.standard_normal()
        return z

    u = stats.weibull_min.ppf(stats.norm.cdf(ar1()), shape, scale=mean_speed)
    phi = mean_direction + direction_std * ar1()
    return WindSeries(np.arange(n_rows) * step_s, u, phi)


def default_series():
    """The shipped three-month, 10-minute synthetic series."""
    ref = resources.files("windfarm_lab").joinpath("data", "wind_series_default.csv")
    return parse_series(ref.read_text())

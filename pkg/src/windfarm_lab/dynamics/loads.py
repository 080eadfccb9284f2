"""Blade-root bending moment surrogate computed from rotor-plane samples."""

import numpy as np

from ..wake.farm import grid_offsets
from ..wake.turbine import AIR_DENSITY

N_BLADES = 3


def sector_weights():
    """(3, 9) weights mapping the nine rotor samples to three blade sectors.

    Blade ``b`` points at azimuth 90 + 120*b deg. Each ring sample is weighted
    by max(0, cos(azimuth difference)); the hub sample has weight 1 in every
    sector. Rows are normalized.
    """
    off = grid_offsets(1.0)
    azimuth = np.arctan2(off[:, 1], off[:, 0])
    ring = np.hypot(off[:, 0], off[:, 1]) > 0
    blades = np.radians(90.0 + 120.0 * np.arange(N_BLADES))
    w = np.maximum(0.0, np.cos(azimuth[None, :] - blades[:, None])) * ring
    w[:, ~ring] = 1.0
    return w / w.sum(axis=1, keepdims=True)


_SECTORS = sector_weights()


def sector_speeds(u_samples):
    """(M, 3) blade-sector speeds from (M, 9) sampled streamwise velocities."""
    return np.asarray(u_samples, dtype=float) @ _SECTORS.T


def load_surrogate(u_samples, ti, ct_eff, spec):
    """Out-of-plane and in-plane blade moments, each (M, 3), in N*m.

    Per blade, thrust ``T = 0.5 * rho * A * Ct * u_b^2 / 3`` acts at two
    thirds of the radius; in-plane moments are ``0.1 * Mop * (1 + TI)``.
    """
    u_b = sector_speeds(u_samples)
    ct_eff = np.asarray(ct_eff, dtype=float)[:, None]
    thrust = 0.5 * AIR_DENSITY * spec.area * ct_eff * u_b**2 / N_BLADES
    m_op = thrust * (2.0 / 3.0) * spec.radius
    m_ip = 0.1 * m_op * (1.0 + np.asarray(ti, dtype=float)[:, None])
    return m_op, m_ip


def moment_penalty(m_op, m_ip):
    """Mean over turbines of summed absolute blade moments (before downscaling)."""
    return float(np.mean(np.abs(m_op).sum(axis=1) + np.abs(m_ip).sum(axis=1)))

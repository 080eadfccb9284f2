"""Gaussian wake deficit with Jimenez deflection and Crespo-Hernandez turbulence.

All kernels work in the wind frame: ``dx`` is the downstream distance from the
wake-generating rotor, ``dy`` the lateral offset and ``dz`` the height above
hub. They broadcast over arrays so a whole rotor grid is evaluated at once.
"""

import numpy as np

from ..errors import DomainError

NEAR_WAKE_LIMIT_D = 0.1


def initial_width(ct):
    """Near-wake width ratio sigma0/D = 0.2 * sqrt(beta(Ct)) (Bastankhah & Porte-Agel)."""
    root = np.sqrt(1.0 - np.asarray(ct, dtype=float))
    beta = 0.5 * (1.0 + root) / root
    return 0.2 * np.sqrt(beta)


def expansion_rate(ti):
    return 0.38 * np.asarray(ti, dtype=float) + 0.004


def initial_skew(yaw_rad, ct):
    return 0.5 * ct * np.sin(yaw_rad) * np.cos(yaw_rad) ** 2


def jimenez_deflection(x, yaw_rad, ct, k, diameter):
    """Lateral wake-centre displacement at downstream distance ``x``.

    Closed form of the Jimenez skew-angle integral (tan expanded to third
    order), oriented so that a positive yaw deflects towards +lateral and
    ``deflection ~ skew0 * x`` for ``k * x << D``.
    """
    xi0 = initial_skew(yaw_rad, ct)
    s = 2.0 * k * x / diameter + 1.0
    scale = xi0 * diameter / (30.0 * k)
    return scale * ((15.0 + xi0**2) - (15.0 * s**4 + xi0**2) / s**5)


def wake_skew(x, yaw_rad, ct, k, diameter):
    """Local skew angle of the wake centreline (rad)."""
    s = 2.0 * k * x / diameter + 1.0
    return initial_skew(yaw_rad, ct) / s**2


def deficit_field(dx, dy, dz, yaw_rad, ct, diameter, ti, speed_ratio=1.0, lateral_offset=0.0,
                  width_ratio=None):
    """Fractional (of free stream) velocity deficit plus the wake shape factor.

    ``width_ratio`` overrides sigma0/D (default :func:`initial_width`);
    ``1/sqrt(8)`` gives the classic actuator-disk width.

    Returns ``(deficit, shape, x_eff)`` where ``shape`` in [0, 1] is the
    normalized Gaussian profile and ``x_eff`` the near-wake clamped distance.
    Points with ``dx <= 0`` get zero deficit and zero shape.
    """
    dx, dy, dz = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (dx, dy, dz)))
    downstream = dx > 0
    x = np.maximum(dx, NEAR_WAKE_LIMIT_D * diameter)
    k = expansion_rate(ti)
    cos_g = np.cos(yaw_rad)
    sigma0 = (initial_width(ct) if width_ratio is None else width_ratio) * diameter
    sigma_y = k * x + sigma0 * cos_g
    sigma_z = k * x + sigma0
    radicand = 1.0 - ct * cos_g * diameter**2 / (8.0 * sigma_y * sigma_z)
    centre = 1.0 - np.sqrt(np.maximum(0.0, radicand))
    delta = jimenez_deflection(x, yaw_rad, ct, k, diameter) + lateral_offset
    shape = np.exp(-((dy - delta) ** 2) / (2.0 * sigma_y**2)) * np.exp(-(dz**2) / (2.0 * sigma_z**2))
    shape = np.where(downstream, shape, 0.0)
    deficit = np.clip(centre * shape * speed_ratio, 0.0, 1.0)
    return deficit, shape, x


def wake_deficit(upstream, query_point, conditions):
    """Fractional deficit that one upstream rotor imposes at a 3-D ground point.

    ``upstream`` is a :class:`~windfarm_lab.wake.farm.WakeSource`;
    ``query_point`` is ``(x, y, z)`` in ground coordinates (m).
    """
    from .conditions import to_wind_frame

    point = np.asarray(query_point, dtype=float)
    values = [*point, upstream.x, upstream.y, upstream.yaw_deg, upstream.ct, upstream.ti,
              upstream.rotor_speed]
    if not np.all(np.isfinite(values)):
        raise DomainError("non-finite input to wake_deficit")
    rel = to_wind_frame(point[:2] - np.array([upstream.x, upstream.y]), conditions.phi_inf)
    ratio = upstream.rotor_speed / conditions.u_inf if conditions.u_inf > 0 else 0.0
    deficit, _, _ = deficit_field(
        rel[0], rel[1], point[2] - upstream.hub_height,
        np.radians(upstream.yaw_deg), upstream.ct, upstream.diameter, upstream.ti,
        speed_ratio=ratio,
    )
    return float(deficit)


def added_turbulence(ct, x, diameter, ti_inf):
    """Crespo-Hernandez wake-added turbulence intensity at distance ``x``."""
    x = np.asarray(x, dtype=float)
    induction = 0.5 * (1.0 - np.sqrt(1.0 - ct))
    safe_x = np.where(x > 0, x, diameter)
    added = 0.73 * induction**0.8325 * ti_inf**0.0325 * (safe_x / diameter) ** -0.32
    return np.where(x > 0, added, 0.0)


def superpose(deficits, axis=None):
    """Sum-of-squares combination of fractional deficits, clipped at 1."""
    d = np.asarray(deficits, dtype=float)
    if d.size == 0:
        return 0.0 if axis is None else np.zeros(np.delete(d.shape, axis))
    return np.minimum(1.0, np.sqrt(np.sum(d**2, axis=axis)))

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class FreeStreamConditions:
    """Inflow at the farm entrance.

    ``phi_inf`` is meteorological: the direction the wind comes FROM, in
    degrees. It is normalized into [0, 360) on construction.
    """

    u_inf: float
    phi_inf: float = 270.0
    ti_inf: float = 0.06

    def __post_init__(self):
        values = (self.u_inf, self.phi_inf, self.ti_inf)
        if not all(np.isfinite(v) for v in values):
            raise DomainError(f"non-finite free-stream conditions {values}")
        if self.u_inf < 0:
            raise DomainError("u_inf must be non-negative")
        if not 0 <= self.ti_inf < 1:
            raise DomainError("ti_inf must lie in [0, 1)")
        object.__setattr__(self, "u_inf", float(self.u_inf))
        object.__setattr__(self, "ti_inf", float(self.ti_inf))
        object.__setattr__(self, "phi_inf", float(self.phi_inf) % 360.0)


def wind_axes(phi_deg):
    """Unit vectors (downstream, lateral) for a meteorological direction."""
    phi = np.radians(phi_deg)
    downstream = np.array([-np.sin(phi), -np.cos(phi)])
    lateral = np.array([-downstream[1], downstream[0]])
    return downstream, lateral


def to_wind_frame(xy, phi_deg):
    """Project (..., 2) ground coordinates onto (downstream, lateral) axes."""
    downstream, lateral = wind_axes(phi_deg)
    xy = np.asarray(xy, dtype=float)
    return np.stack([xy @ downstream, xy @ lateral], axis=-1)

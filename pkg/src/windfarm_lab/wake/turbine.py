from dataclasses import dataclass

import numpy as np

AIR_DENSITY = 1.225  # kg/m^3


@dataclass(frozen=True)
class TurbineSpec:
    """Rotor geometry and aerodynamic coefficients (NREL 5MW-like defaults)."""

    rotor_diameter_m: float = 126.0
    hub_height_m: float = 90.0
    rated_power_w: float = 5.0e6
    cp: float = 0.45
    ct: float = 0.8
    cos_exponent_power: float = 1.88

    def __post_init__(self):
        if not self.rotor_diameter_m > 0:
            raise ValueError("rotor_diameter_m must be positive")
        if not 0 < self.cp < 16 / 27:
            raise ValueError("cp must lie in (0, 16/27)")
        if not 0 < self.ct < 1:
            raise ValueError("ct must lie in (0, 1)")
        if not self.rated_power_w > 0:
            raise ValueError("rated_power_w must be positive")

    @property
    def radius(self):
        return 0.5 * self.rotor_diameter_m

    @property
    def area(self):
        return np.pi * self.radius**2


def turbine_power(speed, yaw_deg, spec, cp=None):
    """Electrical power in W for a rotor-effective wind speed and yaw misalignment.

    ``cp`` overrides the spec's power coefficient (pitch/torque derating).
    Works elementwise on arrays.
    """
    speed = np.asarray(speed, dtype=float)
    if np.any(speed < 0):
        raise ValueError("wind speed must be non-negative")
    cp = spec.cp if cp is None else cp
    cos_term = np.clip(np.cos(np.radians(yaw_deg)), 0.0, None) ** spec.cos_exponent_power
    power = 0.5 * AIR_DENSITY * spec.area * cp * speed**3 * cos_term
    return np.minimum(spec.rated_power_w, power)

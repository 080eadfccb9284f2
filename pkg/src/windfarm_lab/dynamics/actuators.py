import warnings
from dataclasses import dataclass, field

import numpy as np

YAW_LIMIT_DEG = 30.0  # same domain the yaw oracle searches
PITCH_RANGE_DEG = (0.0, 30.0)
TORQUE_RANGE = (0.2, 1.0)


def pitch_torque_effect(pitch_deg, torque_frac):
    """Multipliers applied to (Cp, Ct) by blade pitch and generator torque.

    ``Cp * cos^3(pitch) * torque`` and ``Ct * cos^2(pitch) * torque``.
    Arguments outside pitch in [0, 30] deg or torque in [0.2, 1] are clamped
    with a warning.
    """
    pitch = np.asarray(pitch_deg, dtype=float)
    torque = np.asarray(torque_frac, dtype=float)
    pitch_c = np.clip(pitch, *PITCH_RANGE_DEG)
    torque_c = np.clip(torque, *TORQUE_RANGE)
    if np.any(pitch_c != pitch) or np.any(torque_c != torque):
        warnings.warn("pitch/torque outside the modelled range; clamped", RuntimeWarning, stacklevel=2)
    c = np.cos(np.radians(pitch_c))
    return c**3 * torque_c, c**2 * torque_c


@dataclass
class ActuatorState:
    """Current and target actuator values per turbine, rate limited.

    Columns of ``current``/``target`` are (yaw deg, pitch deg, torque fraction).
    """

    n_turbines: int
    yaw_rate: float = 0.3  # deg/s
    pitch_rate: float = 8.0  # deg/s
    torque_rate: float = 0.1  # fraction/s
    current: np.ndarray = field(default=None)
    target: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.current is None:
            self.current = np.tile([0.0, 0.0, 1.0], (self.n_turbines, 1))
        if self.target is None:
            self.target = self.current.copy()

    @property
    def rates(self):
        return np.array([self.yaw_rate, self.pitch_rate, self.torque_rate])

    @staticmethod
    def clamp_targets(target):
        target = np.array(target, dtype=float)
        if not np.all(np.isfinite(target)):
            raise ValueError("actuator targets must be finite")
        target[:, 0] = np.clip(target[:, 0], -YAW_LIMIT_DEG, YAW_LIMIT_DEG)
        target[:, 1] = np.clip(target[:, 1], *PITCH_RANGE_DEG)
        target[:, 2] = np.clip(target[:, 2], *TORQUE_RANGE)
        return target

    def set_targets(self, target):
        self.target = self.clamp_targets(target)

    def advance(self, dt):
        """Move every actuator toward its target by at most ``rate * dt``."""
        max_step = self.rates * dt
        self.current = self.current + np.clip(self.target - self.current, -max_step, max_step)
        return self.current

    def copy(self):
        return ActuatorState(self.n_turbines, self.yaw_rate, self.pitch_rate, self.torque_rate,
                             self.current.copy(), self.target.copy())

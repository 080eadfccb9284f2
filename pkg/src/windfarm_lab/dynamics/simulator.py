"""Reduced-order dynamic farm: advected wakes, meandering, rate-limited actuators."""

import numpy as np

from ..wake.conditions import FreeStreamConditions, to_wind_frame
from ..wake.farm import FlowAccumulator, downstream_order, rotor_points_wind_frame, wake_effects
from ..wake.turbine import turbine_power
from .actuators import ActuatorState, pitch_torque_effect
from .history import WakeHistoryBuffer
from .loads import load_surrogate
from .meander import MeanderState

DT_S = 3.0
ADVECTION_FACTOR = 0.8
MIN_ADVECTION_WIND = 1.0
MEASUREMENT_NOISE = 0.3
MAX_HISTORY = 20000

MEASURE_FIELDS = (
    "wind_speed", "wind_direction", "power", "yaw", "pitch", "torque",
    "mop_1", "mop_2", "mop_3", "mip_1", "mip_2", "mip_3",
)
N_MEASURES = len(MEASURE_FIELDS)


def constant_inflow(conditions):
    return lambda t: conditions


def advection_lag(distance, u_inf):
    """Travel time (s) of a wake disturbance over ``distance`` metres."""
    return np.maximum(distance, 0.0) / (ADVECTION_FACTOR * max(u_inf, MIN_ADVECTION_WIND))


class DynamicFarm:
    """Time-stepping wake simulator standing in for a high-fidelity farm code.

    Each :meth:`step` moves the actuators toward their targets, advances the
    inflow, and recomputes every rotor's inflow from upstream rotor states
    delayed by the advection time, with wake centres shifted by meandering.
    Returns an (M, 12) measurement array (columns in ``MEASURE_FIELDS``).

    Args:
        layout: the :class:`~windfarm_lab.wake.FarmLayout`.
        inflow: callable mapping time (s) to :class:`FreeStreamConditions`.
        seed: seed for meandering and measurement noise.
    """

    def __init__(self, layout, inflow, seed=None, dt=DT_S, yaw_rate=0.3, pitch_rate=8.0,
                 torque_rate=0.1):
        self.layout = layout
        self.inflow = inflow
        self.dt = float(dt)
        self.rates = dict(yaw_rate=yaw_rate, pitch_rate=pitch_rate, torque_rate=torque_rate)
        self.seed = seed
        pos = layout.positions
        span = np.max(np.hypot(*(pos[:, None, :] - pos[None, :, :]).transpose(2, 0, 1)))
        lag_max = advection_lag(span, MIN_ADVECTION_WIND)
        self.history_capacity = int(min(MAX_HISTORY, np.ceil(lag_max / self.dt) + 2))
        self.reset(seed)

    @property
    def n_turbines(self):
        return self.layout.n_turbines

    def reset(self, seed=None):
        if seed is not None:
            self.seed = seed
        self.rng = np.random.default_rng(self.seed)
        m = self.n_turbines
        self.t = 0.0
        self.actuators = ActuatorState(m, **self.rates)
        self.meander = MeanderState(m)
        self.history = WakeHistoryBuffer(m, self.history_capacity)
        self.conditions = self._conditions(self.t)
        self._solve(lagged=False)
        self._record()
        return self._measure()

    def _conditions(self, t):
        cond = self.inflow(t)
        if not isinstance(cond, FreeStreamConditions):
            cond = FreeStreamConditions(*cond)
        return cond

    def step(self, targets):
        """Advance one time step toward absolute ``targets`` (M, 3)."""
        targets = np.asarray(targets, dtype=float)
        if targets.shape != (self.n_turbines, 3):
            raise ValueError(f"targets must have shape ({self.n_turbines}, 3)")
        self.actuators.set_targets(targets)
        self.actuators.advance(self.dt)
        self.t += self.dt
        self.conditions = self._conditions(self.t)
        c = self.conditions
        self.meander.update(self.rng, self.dt, c.ti_inf, c.u_inf)
        self._solve(lagged=True)
        self._record()
        return self._measure()

    def _coefficients(self):
        spec = self.layout.turbine
        _, pitch, torque = self.actuators.current.T
        cp_mult, ct_mult = pitch_torque_effect(pitch, torque)
        return spec.cp * cp_mult, spec.ct * ct_mult

    def _solve(self, lagged):
        spec = self.layout.turbine
        c = self.conditions
        m = self.n_turbines
        yaw = self.actuators.current[:, 0]
        self.cp_eff, self.ct_eff = self._coefficients()
        xy = to_wind_frame(self.layout.positions, c.phi_inf)
        order = downstream_order(xy)
        pts = rotor_points_wind_frame(xy, yaw, spec)
        flow = FlowAccumulator((m, 9), c)
        speed = np.zeros(m)
        ti = np.zeros(m)
        for rank, i in enumerate(order):
            if not lagged:
                u_i, _, _, ti_i = flow.fields(i)
                speed[i], ti[i] = np.mean(u_i), np.mean(ti_i)
            targets = order[rank + 1:]
            if not len(targets) or c.u_inf <= 0:
                continue
            if lagged:
                lag = advection_lag(xy[targets, 0] - xy[i, 0], c.u_inf)
                past = self.history.lookup(i, self.t - lag)
                source = {k: v[:, None] for k, v in past.items()}
                source["lateral_offset"] = self.meander.offsets[i, targets][:, None]
            else:
                source = dict(yaw_deg=yaw[i], ct=self.ct_eff[i], ti=ti[i], rotor_speed=speed[i])
            source.update(x=xy[i, 0], y=xy[i, 1])
            flow.add(targets, *wake_effects(pts[targets], source, c, spec))
        u, v, w, ti_pts = flow.fields()
        self.samples = dict(u=u, v=v, w=w, ti=ti_pts)
        self.rotor_speed = u.mean(axis=1)
        self.ti = ti_pts.mean(axis=1)
        self.power_w = turbine_power(self.rotor_speed, yaw, spec, cp=self.cp_eff)
        self.m_op, self.m_ip = load_surrogate(u, self.ti, self.ct_eff, spec)

    def _record(self):
        self.history.push(self.t, yaw_deg=self.actuators.current[:, 0], rotor_speed=self.rotor_speed,
                          ct=self.ct_eff, ti=self.ti)

    def _measure(self):
        noise = self.rng.standard_normal(self.n_turbines)
        measured_u = self.rotor_speed * (1.0 + self.ti * noise * MEASUREMENT_NOISE)
        out = np.empty((self.n_turbines, N_MEASURES))
        out[:, 0] = measured_u
        out[:, 1] = self.conditions.phi_inf
        out[:, 2] = self.power_w
        out[:, 3:6] = self.actuators.current
        out[:, 6:9] = self.m_op
        out[:, 9:12] = self.m_ip
        return out

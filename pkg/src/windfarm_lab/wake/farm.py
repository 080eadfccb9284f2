"""Steady-state farm solver on top of the Gaussian wake kernels."""

from dataclasses import dataclass

import numpy as np

from ..errors import ContractViolation
from .conditions import to_wind_frame, wind_axes
from .gaussian import added_turbulence, deficit_field, expansion_rate, wake_skew
from .turbine import turbine_power

GRID_FRACTION = 0.49
MAX_YAW_DEG = 45.0


@dataclass(frozen=True)
class WakeSource:
    """State of a wake-generating rotor as seen by downstream points."""

    x: float
    y: float
    yaw_deg: float
    ct: float
    ti: float
    rotor_speed: float
    diameter: float = 126.0
    hub_height: float = 90.0


@dataclass
class RotorSampleGrid:
    """Nine rotor-plane samples per turbine: ground positions and flow values."""

    points: np.ndarray  # (M, 9, 3) ground x, y and height z
    u: np.ndarray  # (M, 9)
    v: np.ndarray
    w: np.ndarray
    ti: np.ndarray


@dataclass
class SteadyFarmState:
    conditions: object
    yaw_deg: np.ndarray
    rotor_speed: np.ndarray
    power_w: np.ndarray
    ti: np.ndarray
    ct: np.ndarray
    grid: RotorSampleGrid
    order: np.ndarray

    @property
    def total_power_w(self):
        return float(np.sum(self.power_w))


def grid_offsets(radius):
    """(9, 2) lateral/vertical rotor-plane offsets, row-major from the bottom."""
    o = GRID_FRACTION * radius * np.array([-1.0, 0.0, 1.0])
    dz, dy = np.meshgrid(o, o, indexing="ij")
    return np.column_stack([dy.ravel(), dz.ravel()])


def rotor_points_wind_frame(xy_wind, yaw_deg, spec):
    """(M, 9, 3) sample positions of every rotor in wind-frame coordinates."""
    off = grid_offsets(spec.radius)
    g = np.radians(np.asarray(yaw_deg, dtype=float))[:, None]
    pts = np.empty((len(xy_wind), 9, 3))
    pts[..., 0] = xy_wind[:, :1] - off[:, 0] * np.sin(g)
    pts[..., 1] = xy_wind[:, 1:] + off[:, 0] * np.cos(g)
    pts[..., 2] = spec.hub_height_m + off[:, 1]
    return pts


def wake_effects(points, source, conditions, spec):
    """Contribution of one wake-generating rotor at wind-frame ``points``.

    ``source`` maps ``x, y, yaw_deg, ct, ti, rotor_speed`` (and optionally
    ``lateral_offset``) to scalars or arrays broadcastable against the
    points, so a single rotor can present a different (e.g. time-lagged)
    state to each receiving point. Returns ``(deficit, added_ti, v)`` where
    ``added_ti`` is the Crespo-Hernandez increment weighted by the wake shape.
    """
    D = spec.rotor_diameter_m
    yaw = np.radians(source["yaw_deg"])
    ct, ti = source["ct"], source["ti"]
    deficit, shape, x_eff = deficit_field(
        points[..., 0] - source["x"], points[..., 1] - source["y"],
        points[..., 2] - spec.hub_height_m, yaw, ct, D, ti,
        speed_ratio=np.asarray(source["rotor_speed"]) / conditions.u_inf,
        lateral_offset=source.get("lateral_offset", 0.0),
    )
    skew = wake_skew(x_eff, yaw, ct, expansion_rate(ti), D)
    v = deficit * conditions.u_inf * np.sin(skew) / 2.0
    added = added_turbulence(ct, x_eff, D, conditions.ti_inf) * shape
    return deficit, added, v


class FlowAccumulator:
    """Running superposition of wake effects on a set of sample points."""

    def __init__(self, shape, conditions):
        self.conditions = conditions
        self.deficit_sq = np.zeros(shape)
        self.added_sq = np.zeros(shape)
        self.v = np.zeros(shape)

    def add(self, index, deficit, added, v):
        self.deficit_sq[index] += deficit**2
        self.added_sq[index] += added**2
        self.v[index] += v

    def fields(self, index=slice(None)):
        """``(u, v, w, ti)`` at the selected points."""
        c = self.conditions
        u = c.u_inf * (1.0 - np.minimum(1.0, np.sqrt(self.deficit_sq[index])))
        ti = np.sqrt(c.ti_inf**2 + self.added_sq[index])
        v = self.v[index]
        return u, v, np.zeros_like(u), ti


def downstream_order(xy_wind):
    """Indices sorted by downstream coordinate; ties keep turbine index order."""
    return np.argsort(xy_wind[:, 0], kind="stable")


def solve_farm(layout, yaws, conditions, ct=None, cp=None):
    """Steady per-rotor flow and power for given yaw angles (deg).

    ``ct`` and ``cp`` optionally override the turbine coefficients per rotor
    (used for pitch/torque derating).
    """
    spec = layout.turbine
    m = layout.n_turbines
    yaws = np.asarray(yaws, dtype=float)
    if yaws.shape != (m,):
        raise ContractViolation(f"expected {m} yaw angles, got shape {yaws.shape}")
    if np.any(np.abs(yaws) > MAX_YAW_DEG + 1e-9):
        raise ContractViolation(f"yaw angles must satisfy |yaw| <= {MAX_YAW_DEG} deg")
    ct = np.full(m, spec.ct) if ct is None else np.broadcast_to(np.asarray(ct, dtype=float), (m,)).copy()
    cp = np.full(m, spec.cp) if cp is None else np.broadcast_to(np.asarray(cp, dtype=float), (m,))

    xy = to_wind_frame(layout.positions, conditions.phi_inf)
    order = downstream_order(xy)
    pts = rotor_points_wind_frame(xy, yaws, spec)
    flow = FlowAccumulator((m, 9), conditions)
    speed = np.zeros(m)
    ti = np.zeros(m)
    for rank, i in enumerate(order):
        u_i, _, _, ti_i = flow.fields(i)
        speed[i] = np.mean(u_i)
        ti[i] = np.mean(ti_i)
        targets = order[rank + 1:]
        if len(targets) and conditions.u_inf > 0:
            source = dict(x=xy[i, 0], y=xy[i, 1], yaw_deg=yaws[i], ct=ct[i], ti=ti[i],
                          rotor_speed=speed[i])
            flow.add(targets, *wake_effects(pts[targets], source, conditions, spec))
    power = turbine_power(speed, yaws, spec, cp=cp)

    downstream, lateral = wind_axes(conditions.phi_inf)
    ground = pts[..., :1] * downstream + pts[..., 1:2] * lateral
    grid = RotorSampleGrid(np.concatenate([ground, pts[..., 2:]], axis=-1), *flow.fields())
    return SteadyFarmState(conditions, yaws.copy(), speed, power, ti, ct, grid, order)


def load_proxy_static(state):
    """Turbulence-and-shear load indicator, before any downscaling.

    Per rotor: the sum of the nine sampled turbulence intensities plus the
    standard deviations of u, v and w across those samples; averaged over
    rotors.
    """
    g = state.grid
    per_rotor = g.ti.sum(axis=1) + g.u.std(axis=1) + g.v.std(axis=1) + g.w.std(axis=1)
    return float(np.mean(per_rotor))

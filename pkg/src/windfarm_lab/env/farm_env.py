"""Array-level farm environment shared by the per-agent and centralized views."""

import numpy as np

from ..bridge.estimator import FreeStreamEstimator
from ..dynamics.actuators import ActuatorState
from ..dynamics.loads import moment_penalty
from ..dynamics.series import default_series, read_series
from ..dynamics.simulator import DynamicFarm, constant_inflow
from ..errors import ContractViolation
from ..wake.conditions import FreeStreamConditions
from ..wake.farm import load_proxy_static, solve_farm
from ..wake.layout import load_layout
from .budget import ActuationBudget
from .config import EnvConfig
from .rewards import RewardShaper, reward_production
from .spaces import Box

ACTION_BOUNDS = {"yaw": 5.0, "pitch": 1.0, "torque": 0.05}
CONTROL_COLUMN = {"yaw": 0, "pitch": 1, "torque": 2}
STATIC_OBS_FIELDS = ("wind_speed", "wind_direction", "yaw", "yaw_target")
DYNAMIC_OBS_FIELDS = ("wind_speed", "wind_direction", "yaw", "pitch", "torque",
                      "yaw_target", "pitch_target", "torque_target")
MAX_OBS_SPEED = 30.0

_LOAD_SCALE_CACHE = {}


class DirectLink:
    """In-process connection to a :class:`DynamicFarm`.

    Dynamic environments talk to their simulator through a link with three
    calls: ``open(inflow, seed)`` and ``step(targets)`` both return an (M, 12)
    measurement array (or None once the simulator has closed), and
    ``close()`` ends the episode.
    """

    def __init__(self, layout, config):
        self.layout = layout
        self.config = config
        self.farm = None

    def open(self, inflow, seed):
        c = self.config
        self.farm = DynamicFarm(self.layout, inflow, seed=seed, dt=c.dynamic_step_s,
                                yaw_rate=c.yaw_rate, pitch_rate=c.pitch_rate,
                                torque_rate=c.torque_rate)
        return self.farm.reset(seed)

    def step(self, targets):
        return self.farm.step(targets)

    def close(self):
        pass


def make_link(layout, config):
    endpoint = config.bridge_endpoint
    if not endpoint:
        return DirectLink(layout, config)
    from ..bridge.session import BridgeLink

    return BridgeLink(layout, config, endpoint)


class FarmEnv:
    """Cooperative wind-farm control task with one agent per turbine.

    Works on stacked arrays: :meth:`reset` returns (M, obs_dim) local
    observations and :meth:`step` takes (M, act_dim) actuator deltas and
    returns ``(obs, rewards, terminated, info)``. The per-agent and
    centralized interfaces wrap this class.

    Args:
        config: an :class:`EnvConfig` (keyword overrides are applied on top).
        layout: a :class:`FarmLayout`; defaults to the registered one named
            in ``config.layout``.
        reward_shaper: callable ``(farm, agents) -> rewards``.
        link: simulator link for dynamic envs (defaults from the config).
        obs_fields: optional subset (and order) of the observation fields to
            expose, e.g. the static layout on a dynamic env.
    """

    def __init__(self, config=None, layout=None, reward_shaper=None, link=None, obs_fields=None,
                 **overrides):
        config = config or EnvConfig()
        if overrides:
            config = config.replace(**overrides)
        self.config = config
        self.layout = layout if layout is not None else load_layout(config.layout)
        self.reward_shaper = reward_shaper or RewardShaper()
        self.dynamic = config.simulator == "dynamic"
        self.n_agents = self.layout.n_turbines
        self.controls = config.controls
        self._columns = [CONTROL_COLUMN[c] for c in self.controls]
        self._bounds = np.array([ACTION_BOUNDS[c] for c in self.controls])
        self._rates = np.array([config.yaw_rate, config.pitch_rate, config.torque_rate])
        self.link = make_link(self.layout, config) if self.dynamic else None
        full = DYNAMIC_OBS_FIELDS if self.dynamic else STATIC_OBS_FIELDS
        obs_fields = tuple(obs_fields) if obs_fields is not None else full
        unknown = set(obs_fields) - set(full)
        if unknown or not obs_fields:
            raise ValueError(f"unknown observation fields {sorted(unknown)}; available: {full}")
        self.obs_fields = obs_fields
        self._obs_idx = [full.index(f) for f in obs_fields]
        self.c_load = config.c_load if config.c_load is not None else self._layout_load_scale()
        self.rng = np.random.default_rng(config.seed)
        self._series = None
        self.terminated = True
        self.k = 0

    # spaces -----------------------------------------------------------
    @property
    def obs_dim(self):
        return len(self.obs_fields)

    @property
    def act_dim(self):
        return len(self.controls)

    @property
    def observation_space(self):
        if self.dynamic:
            low = np.array([0, 0, -45, 0, 0, -45, 0, 0], dtype=float)
            high = np.array([MAX_OBS_SPEED, 360, 45, 30, 1, 45, 30, 1], dtype=float)
        else:
            low = np.array([0, 0, -45, -45], dtype=float)
            high = np.array([MAX_OBS_SPEED, 360, 45, 45], dtype=float)
        return Box(low[self._obs_idx], high[self._obs_idx])

    @property
    def global_observation_space(self):
        local = self.observation_space
        return Box(np.concatenate([np.tile(local.low, self.n_agents), [0, 0]]),
                   np.concatenate([np.tile(local.high, self.n_agents), [MAX_OBS_SPEED, 360]]))

    @property
    def action_space(self):
        return Box(-self._bounds, self._bounds)

    # episode ----------------------------------------------------------
    def reset(self, seed=None):
        if seed is not None:
            self.rng = np.random.default_rng(seed)
        c = self.config
        m = self.n_agents
        self.k = 0
        self.terminated = False
        self.target = np.tile([0.0, 0.0, 1.0], (m, 1))
        self.budget = ActuationBudget(m, c.step_s, c.duty_cap)
        self.rejected = np.zeros(m, dtype=bool)
        self._start_row = 0
        self._conditions = self._sample_conditions()
        if self.dynamic:
            self.estimator = FreeStreamEstimator(m, c.buffer_window)
            sim_seed = int(self.rng.integers(2**32))
            self._absorb(self.link.open(self._inflow(), sim_seed))
        else:
            self._solve_static()
        return self.observations()

    def step(self, actions):
        if self.terminated:
            raise ContractViolation("episode has terminated; call reset() first")
        a = np.asarray(actions, dtype=float)
        if a.size != self.n_agents * self.act_dim:
            raise ContractViolation(
                f"expected {self.n_agents}x{self.act_dim} actions, got shape {a.shape}")
        a = a.reshape(self.n_agents, self.act_dim)
        if not np.all(np.isfinite(a)):
            raise ContractViolation("actions must be finite")
        a = np.clip(a, -self._bounds, self._bounds)
        delta = np.zeros((self.n_agents, 3))
        delta[:, self._columns] = a
        proposed = ActuatorState.clamp_targets(self.target + delta)
        change = np.abs(proposed - self.target)
        required = np.max(change / self._rates, axis=1)
        accepted = self.budget.gate(required)
        self.rejected = ~accepted & (required > 0)
        self.target = np.where(accepted[:, None], proposed, self.target)
        self.k += 1
        closed = False
        if self.dynamic:
            meas = self.link.step(self.target)
            if meas is None:
                closed = True
            else:
                self._absorb(meas)
        else:
            self._conditions = self._static_conditions(self.k)
            self._solve_static()
        self.terminated = closed or self.k >= self.config.episode_length
        if self.terminated and self.dynamic and not closed:
            self.link.close()
        rewards, info = self._rewards()
        return self.observations(), rewards, self.terminated, info

    # observation / reward ---------------------------------------------
    def observations(self):
        if self.dynamic:
            meas = self.measurements
            full = np.column_stack([meas[:, [0, 1, 3, 4, 5]], self.target])
        else:
            full = np.column_stack([self.rotor_speed, np.full(self.n_agents, self._conditions.phi_inf),
                                    self.target[:, 0], self.target[:, 0]])
        return full[:, self._obs_idx]

    def global_observation(self, obs=None):
        obs = self.observations() if obs is None else obs
        u_inf, phi_inf = self.freestream()
        return np.concatenate([np.ravel(obs), [u_inf, phi_inf]])

    def freestream(self):
        """Free-stream (u, phi) the agents are told about."""
        if self.dynamic:
            return self.estimator.estimate()
        return self._conditions.u_inf, self._conditions.phi_inf

    @property
    def yaw(self):
        """Current yaw angles (deg)."""
        return self.measurements[:, 3].copy() if self.dynamic else self.target[:, 0].copy()

    def _rewards(self):
        u_inf, phi_inf = self.freestream()
        r_power = reward_production(self.power_w / 1e3, u_inf)
        farm = dict(r_power=r_power, load_raw=self.load_raw, alpha=self.config.alpha,
                    c_load=self.c_load, power_total_w=float(np.sum(self.power_w)),
                    u_inf=u_inf, phi_inf=phi_inf)
        agents = [dict(power_w=float(p), wind_speed=float(u), yaw=float(y), rejected=bool(r))
                  for p, u, y, r in zip(self.power_w, self.rotor_speed, self.yaw, self.rejected)]
        rewards = np.asarray(self.reward_shaper(farm, agents), dtype=float)
        if rewards.shape != (self.n_agents,) or not np.all(np.isfinite(rewards)):
            raise ContractViolation("reward shaper must return one finite reward per agent")
        fractions = self.budget.fraction
        info = dict(power_total_w=farm["power_total_w"], load_raw=self.load_raw, r_power=r_power,
                    u_inf=u_inf, phi_inf=phi_inf, rejected=self.rejected.copy(),
                    power_w=self.power_w.copy(), yaw=self.yaw)
        for i, f in enumerate(fractions):
            info[f"budget_frac_agent_{i}"] = float(f)
        return rewards, info

    # simulator plumbing -----------------------------------------------
    def _solve_static(self):
        state = solve_farm(self.layout, self.target[:, 0], self._conditions)
        self.state = state
        self.rotor_speed = state.rotor_speed
        self.power_w = state.power_w
        self.load_raw = load_proxy_static(state)

    def _absorb(self, meas):
        self.measurements = np.asarray(meas, dtype=float)
        self.estimator.push(self.measurements[:, 0], self.measurements[:, 1])
        self.rotor_speed = self.measurements[:, 0]
        self.power_w = self.measurements[:, 2]
        self.load_raw = moment_penalty(self.measurements[:, 6:9], self.measurements[:, 9:12])

    def _sample_conditions(self):
        c = self.config
        direction = c.wind_direction if c.wind_direction is not None else self.layout.prevailing_direction
        if c.scenario == "I":
            return FreeStreamConditions(c.wind_speed, direction, c.ti_inf)
        if c.scenario == "II":
            u = c.wind_speed * self.rng.weibull(c.weibull_shape)
            phi = self.rng.normal(direction, c.direction_std)
            return FreeStreamConditions(u, phi, c.ti_inf)
        series = self.series
        self._start_row = int(self.rng.integers(0, max(0, len(series) - c.episode_length) + 1))
        return self._static_conditions(0)

    @property
    def series(self):
        if self._series is None:
            path = self.config.series_path
            self._series = read_series(path) if path else default_series()
        return self._series

    def _static_conditions(self, k):
        if self.config.scenario != "III":
            return self._conditions
        s = self.series
        row = min(self._start_row + k, len(s) - 1)
        return FreeStreamConditions(s.u_inf[row], s.phi_inf[row], self.config.ti_inf)

    def _inflow(self):
        if self.config.scenario != "III":
            return constant_inflow(self._conditions)
        s = self.series
        t0 = s.time_s[self._start_row]
        ti = self.config.ti_inf
        return lambda t: FreeStreamConditions(*s.at(t0 + t), ti)

    def _layout_load_scale(self):
        stored = self.layout.c_load_dynamic if self.dynamic else self.layout.c_load_static
        if stored is not None:
            return stored
        key = (self.layout.name, self.layout.positions.tobytes(), self.config.simulator)
        if key not in _LOAD_SCALE_CACHE:
            from .calibration import calibrate_load_scale

            _LOAD_SCALE_CACHE[key] = calibrate_load_scale(self.layout, self.config.simulator)
        return _LOAD_SCALE_CACHE[key]

    def close(self):
        if self.link is not None and not self.terminated:
            self.link.close()
        self.terminated = True

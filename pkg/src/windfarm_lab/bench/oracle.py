"""Brute-force yaw optimization of the static model."""

import itertools
from dataclasses import dataclass

import numpy as np

from ..env.rewards import reward_production
from ..wake.farm import load_proxy_static, solve_farm

EXHAUSTIVE_MAX_TURBINES = 4
EXHAUSTIVE_HARD_LIMIT = 12


@dataclass(frozen=True)
class OracleResult:
    yaws: np.ndarray
    power_w: float
    greedy_power_w: float
    objective: float
    greedy_objective: float
    method: str

    @property
    def gain(self):
        """Relative power gain over all-zero yaws."""
        return self.power_w / self.greedy_power_w - 1.0 if self.greedy_power_w > 0 else 0.0


def _objective(layout, conditions, alpha, c_load):
    if alpha is None:
        return lambda yaws: float(solve_farm(layout, yaws, conditions).total_power_w)

    def reward(yaws):
        state = solve_farm(layout, yaws, conditions)
        r_power = reward_production(state.power_w / 1e3, conditions.u_inf)
        return r_power - alpha * c_load * load_proxy_static(state)

    return reward


def grid_search_oracle(layout, conditions, step_deg=5.0, max_yaw_deg=30.0, method="auto",
                       alpha=None, c_load=None, max_sweeps=50):
    """Best yaws on a ``step_deg`` grid within +-``max_yaw_deg``.

    Maximizes total power, or the environment reward
    ``r_power - alpha * c_load * load`` when ``alpha`` is given. ``method``
    is ``"exhaustive"``, ``"coordinate"`` (cyclic coordinate descent until a
    full sweep changes nothing) or ``"auto"`` (exhaustive up to 4 turbines).
    Ties keep the first candidate in grid order, so the all-zero setting
    wins unless something is strictly better.
    """
    m = layout.n_turbines
    if alpha is not None and c_load is None:
        c_load = layout.c_load_static
        if c_load is None:
            raise ValueError("a load-aware objective needs c_load")
    if method == "auto":
        method = "exhaustive" if m <= EXHAUSTIVE_MAX_TURBINES else "coordinate"
    if method == "exhaustive" and m > EXHAUSTIVE_HARD_LIMIT:
        raise ValueError(f"exhaustive search over {m} turbines is intractable; use method='coordinate'")
    n_half = int(round(max_yaw_deg / step_deg))
    offsets = np.arange(-n_half, n_half + 1) * step_deg
    # zero first so ties resolve toward greedy
    grid = np.concatenate([[0.0], offsets[offsets != 0]])
    f = _objective(layout, conditions, alpha, c_load)
    zero = np.zeros(m)
    best_yaws, best_val = zero, f(zero)
    greedy_val = best_val
    if method == "exhaustive":
        for combo in itertools.product(grid, repeat=m):
            val = f(np.array(combo))
            if val > best_val + 1e-12:
                best_yaws, best_val = np.array(combo), val
    elif method == "coordinate":
        yaws = zero.copy()
        for _ in range(max_sweeps):
            changed = False
            for i in range(m):
                for cand in grid:
                    if cand == yaws[i]:
                        continue
                    trial = yaws.copy()
                    trial[i] = cand
                    val = f(trial)
                    if val > best_val + 1e-12:
                        yaws, best_val, changed = trial, val, True
            if not changed:
                break
        best_yaws = yaws
    else:
        raise ValueError(f"unknown method {method!r}")
    power = float(solve_farm(layout, best_yaws, conditions).total_power_w)
    greedy = float(solve_farm(layout, zero, conditions).total_power_w)
    return OracleResult(best_yaws, power, greedy, best_val, greedy_val, method)

import numpy as np

MIN_WIND_SPEED = 1.0


def reward_production(powers_kw, u_inf):
    """Mean per-turbine power (kW) normalized by the cubed free-stream speed.

    Returns 0 when ``u_inf`` is at or below 1 m/s.
    """
    if u_inf <= MIN_WIND_SPEED:
        return 0.0
    powers_kw = np.asarray(powers_kw, dtype=float)
    return float(np.mean(powers_kw) / u_inf**3)


def combined_reward(r_power, load_raw, alpha=1.0, c_load=1.0):
    return r_power - alpha * c_load * load_raw


class RewardShaper:
    """Maps per-step farm summaries to one reward per agent.

    Subclass and override :meth:`__call__`, or pass any callable with the
    same signature to the environment. ``farm`` holds ``r_power``,
    ``load_raw``, ``alpha``, ``c_load``, ``power_total_w``, ``u_inf`` and
    ``phi_inf``; ``agents`` is a list of per-agent dicts (``power_w``,
    ``wind_speed``, ``yaw``, ``rejected``). The default gives every agent the
    common reward ``r_power - alpha * c_load * load_raw``.
    """

    def __call__(self, farm, agents):
        r = combined_reward(farm["r_power"], farm["load_raw"], farm["alpha"], farm["c_load"])
        return np.full(len(agents), r)

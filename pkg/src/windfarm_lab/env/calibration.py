import numpy as np

from .config import EnvConfig

CALIBRATION_STEPS = {"static": 1, "dynamic": 150}


def calibrate_load_scale(layout, simulator, wind_speed=8.0, steps=None, seed=0):
    """Load downscale constant making the greedy load term match the power term.

    Runs the greedy (all-zero action) policy under constant wind from the
    layout's prevailing direction and returns mean(r_power) / mean(load_raw).
    The static model is steady, so one step suffices there.
    """
    from .farm_env import FarmEnv

    steps = steps or CALIBRATION_STEPS[simulator]
    cfg = EnvConfig(layout=layout.name, simulator=simulator, scenario="I", wind_speed=wind_speed,
                    episode_length=steps, c_load=1.0, seed=seed)
    env = FarmEnv(cfg, layout=layout)
    env.reset(seed)
    zero = np.zeros((env.n_agents, env.act_dim))
    r_power, load = [], []
    done = False
    while not done:
        _, _, done, info = env.step(zero)
        r_power.append(info["r_power"])
        load.append(info["load_raw"])
    return float(np.mean(r_power) / np.mean(load))

"""Zero-shot evaluation and fine-tuning of static-trained policies on the dynamic model."""

from dataclasses import dataclass, field

import numpy as np

from ..env.farm_env import STATIC_OBS_FIELDS, FarmEnv
from ..marl.ppo import TrainConfig
from ..marl.trainers import core_env, run_episode, train_ippo, train_mappo

FINE_TUNE_STEPS = 28800  # one simulated day at 3 s per step
TRANSFER_EPISODE_LENGTH = 900  # 45 simulated minutes
TAIL_STEPS = 300


def static_view(env):
    """Yaw-only dynamic env showing the static observation fields.

    The dynamic observation carries pitch and torque (current and target)
    that a static-trained policy never saw; they are dropped, and the action
    is restricted to yaw so pitch and torque stay at their defaults.
    """
    core = core_env(env)
    cfg = core.config.replace(controls=("yaw",))
    return FarmEnv(cfg, layout=core.layout, reward_shaper=core.reward_shaper,
                   obs_fields=STATIC_OBS_FIELDS)


def greedy_policy(obs):
    return np.zeros((len(obs), 1))


def _rollout(policy, env, seed):
    """Per-step farm power and load over one episode."""
    core = core_env(env)
    obs = core.reset(seed)
    power, load = [], []
    done = False
    while not done:
        actions = policy.act(obs) if hasattr(policy, "act") else policy(obs)
        obs, _, done, info = core.step(actions)
        power.append(info["power_total_w"])
        load.append(info["load_raw"])
    return np.array(power), np.array(load), core.yaw


def compare_to_greedy(policy, env, seed=0, tail_steps=TAIL_STEPS):
    """Power of ``policy`` relative to all-zero actions on the same seeded episode.

    ``tail_gain`` compares mean power over the last ``tail_steps`` steps
    (after the slow, duty-cycle-limited yaw ramp); ``energy_gain`` compares
    the whole episode.
    """
    p_pol, l_pol, yaw = _rollout(policy, env, seed)
    p_greedy, l_greedy, _ = _rollout(greedy_policy, env, seed)
    tail = slice(-min(tail_steps, len(p_pol)), None)
    return dict(tail_gain=float(p_pol[tail].mean() / p_greedy[tail].mean() - 1.0),
                energy_gain=float(p_pol.sum() / p_greedy.sum() - 1.0),
                load_change=float(l_pol.mean() / l_greedy.mean() - 1.0),
                final_yaw=yaw, power=p_pol, load=l_pol, greedy_power=p_greedy, greedy_load=l_greedy)


@dataclass
class TransferResult:
    zero_shot: dict
    fine_tuned: dict
    policy: object
    metrics: list = field(default_factory=list)
    trajectory: np.ndarray = None  # (steps, 3): step, farm power W, raw load


def transfer_finetune(policy, env_factory, steps=FINE_TUNE_STEPS, config=None, seed=0,
                      episode_length=TRANSFER_EPISODE_LENGTH, algo="ippo"):
    """Evaluate a static-trained policy zero-shot on a dynamic env, then keep training it.

    ``env_factory()`` returns a dynamic farm env; it is viewed through
    :func:`static_view`. The fine-tuning run logs every step's farm power and
    load (``trajectory``) and an evaluation row after every update.
    """
    config = config or TrainConfig(eval_every=1, eval_episode_length=episode_length)

    def factory():
        core = core_env(env_factory())
        return static_view(FarmEnv(core.config.replace(episode_length=episode_length),
                                   layout=core.layout, reward_shaper=core.reward_shaper))

    eval_env = factory()
    if core_env(eval_env).obs_dim != policy.actors[0].net.sizes[0]:
        raise ValueError("policy input width does not match the static observation layout")
    zero_shot = compare_to_greedy(policy, eval_env, seed)
    trajectory = []
    record = lambda k, info: trajectory.append((k, info["power_total_w"], info["load_raw"]))  # noqa: E731
    trainer = train_mappo if algo == "mappo" else train_ippo
    result = trainer(factory, config, total_steps=steps, seed=seed, init_policy=policy,
                     step_callback=record)
    fine_tuned = compare_to_greedy(result.policy, eval_env, seed)
    return TransferResult(zero_shot, fine_tuned, result.policy, result.metrics, np.array(trajectory))


__all__ = ["static_view", "compare_to_greedy", "transfer_finetune", "TransferResult", "run_episode"]

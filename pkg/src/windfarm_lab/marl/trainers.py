"""IPPO, MAPPO and single-agent PPO training loops."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractViolation
from ..env.farm_env import FarmEnv
from .metrics import METRIC_COLUMNS, MetricsLog
from .nn import Adam
from .policy import Critic, GaussianActor
from .ppo import RolloutBuffer, TrainConfig, learning_rate, mappo_update, ppo_update


class FarmPolicy:
    """Per-agent actors plus the observation normalization they were trained with."""

    def __init__(self, actors, obs_space, algo="ippo"):
        self.actors = list(actors)
        self.obs_space = obs_space
        self.algo = algo

    @property
    def n_agents(self):
        return len(self.actors)

    def act(self, obs, deterministic=True, rng=None):
        """Environment actions (M, act_dim) for local observations (M, obs_dim)."""
        obs = np.asarray(obs, dtype=float)
        if obs.shape[0] != self.n_agents:
            raise ContractViolation(f"policy has {self.n_agents} agents, got {obs.shape[0]} observations")
        x = self.obs_space.normalize(obs)
        out = []
        for actor, o in zip(self.actors, x):
            if deterministic:
                z = actor.mean(o)
            else:
                z, _ = actor.sample(o, rng.standard_normal(len(actor.log_std.data)))
            out.append(actor.to_env(z))
        return np.array(out)

    __call__ = act


@dataclass
class TrainResult:
    policy: FarmPolicy
    metrics: list = field(default_factory=list)
    critics: list = field(default_factory=list)


def core_env(env):
    """The underlying :class:`FarmEnv` of any wrapper (or the env itself)."""
    return env if isinstance(env, FarmEnv) else env.core


def run_episode(policy, env, seed=None, deterministic=True, rng=None):
    """One evaluation episode; returns totals of reward, power and load.

    ``policy`` is any callable mapping (M, obs_dim) observations to (M,
    act_dim) actions.
    """
    core = core_env(env)
    obs = core.reset(seed)
    score = power = load = 0.0
    done = False
    while not done:
        if isinstance(policy, FarmPolicy):
            actions = policy.act(obs, deterministic, rng)
        else:
            actions = policy(obs)
        obs, rewards, done, info = core.step(actions)
        score += float(rewards[0])
        power += info["power_total_w"]
        load += info["load_raw"]
    return dict(score=score, power_sum=power, load_raw=load, final_yaw=core.yaw,
                final_power_w=info["power_total_w"])


def evaluation_env(env, config):
    core = core_env(env)
    return FarmEnv(core.config.replace(episode_length=config.eval_episode_length),
                   layout=core.layout, reward_shaper=core.reward_shaper, obs_fields=core.obs_fields)


def _copy_actors(source, actors):
    for src, dst in zip(source.actors, actors):
        pairs = list(zip(src.parameters, dst.parameters))
        if len(pairs) != len(dst.parameters) or any(a.data.shape != b.data.shape for a, b in pairs):
            raise ContractViolation("initial policy does not match the environment's dimensions")
        for a, b in pairs:
            b.data = a.data.copy()


def _train_multi(env_factory, config, total_steps, seed, shared_critic, metrics_path=None,
                 init_policy=None, step_callback=None):
    config = config or TrainConfig()
    env = core_env(env_factory())
    eval_env = evaluation_env(env, config)
    rng = np.random.default_rng(seed)
    m, d, a = env.n_agents, env.obs_dim, env.act_dim
    obs_space, state_space = env.observation_space, env.global_observation_space
    scale = env.action_space.high
    actors, critics, optimizers = [], [], []
    for _ in range(m):
        actors.append(GaussianActor(d, a, rng, config.hidden, scale))
        if not shared_critic:
            critics.append(Critic(d, rng, config.hidden))
            optimizers.append(Adam(actors[-1].parameters + critics[-1].parameters, config.learning_rate))
    if shared_critic:
        critics = [Critic(state_space.shape[0], rng, config.hidden)]
        optimizers = [Adam(actor.parameters, config.learning_rate) for actor in actors]
        critic_opt = Adam(critics[0].parameters, config.learning_rate)
    if init_policy is not None:
        if init_policy.n_agents != m:
            raise ContractViolation(f"initial policy has {init_policy.n_agents} agents, env has {m}")
        _copy_actors(init_policy, actors)
    critic_dim = state_space.shape[0] if shared_critic else d
    policy = FarmPolicy(actors, obs_space, "mappo" if shared_critic else "ippo")
    log = MetricsLog(metrics_path)
    lr_fn = lambda k: learning_rate(config, k, total_steps)  # noqa: E731

    def views(obs):
        x = obs_space.normalize(obs)
        if shared_critic:
            g = state_space.normalize(env.global_observation(obs))
            return x, np.tile(g, (m, 1))
        return x, x

    def values(critic_in):
        if shared_critic:
            return np.full(m, critics[0].value(critic_in[0]))
        return np.array([c.value(ci) for c, ci in zip(critics, critic_in)])

    obs = env.reset(seed)
    steps = 0
    for update in range(1, config.n_updates(total_steps) + 1):
        buf = RolloutBuffer(config.num_steps, m, d, a, critic_dim)
        while not buf.full:
            x, critic_in = views(obs)
            noise = rng.standard_normal((m, a))
            z = np.empty((m, a))
            logp = np.empty(m)
            for i, actor in enumerate(actors):
                z[i], logp[i] = actor.sample(x[i], noise[i])
            v = values(critic_in)
            actions = np.array([actor.to_env(zi) for actor, zi in zip(actors, z)])
            next_obs, rewards, done, info = env.step(actions)
            buf.add(x, critic_in, z, logp, rewards, v, done)
            steps += 1
            if step_callback is not None:
                step_callback(steps, info)
            obs = env.reset() if done else next_obs
        buf.finish(values(views(obs)[1]), config.gamma, config.gae_lambda)
        if shared_critic:
            diag = mappo_update([buf.agent(i) for i in range(m)], actors, critics[0], optimizers,
                                critic_opt, config, rng, lr_fn)
        else:
            per = [ppo_update(buf.agent(i), actors[i], critics[i], optimizers[i], config, rng, lr_fn)
                   for i in range(m)]
            diag = {k: float(np.mean([p[k] for p in per])) for k in per[0]}
        if update % config.eval_every == 0:
            ev = run_episode(policy, eval_env, seed=seed)
            log.append(dict(update=update, step=steps, score=ev["score"], power_sum=ev["power_sum"],
                            load_raw=ev["load_raw"], kl=diag["approx_kl"], clipfrac=diag["clipfrac"]))
    return TrainResult(policy, log.rows, critics)


def train_ippo(env_factory, config=None, total_steps=200_000, seed=0, metrics_path=None,
               init_policy=None, step_callback=None):
    """Independent PPO: one actor and one local-observation critic per agent.

    ``env_factory()`` must return a per-agent farm env; evaluation every
    ``config.eval_every`` updates runs the deterministic policy for
    ``config.eval_episode_length`` steps. ``init_policy`` warm-starts the
    actors; ``step_callback(step, info)`` sees every environment step.
    """
    return _train_multi(env_factory, config, total_steps, seed, False, metrics_path,
                        init_policy, step_callback)


def train_mappo(env_factory, config=None, total_steps=200_000, seed=0, metrics_path=None,
                init_policy=None, step_callback=None):
    """Per-agent actors with one critic over the global observation."""
    return _train_multi(env_factory, config, total_steps, seed, True, metrics_path,
                        init_policy, step_callback)


def train_ppo(env_factory, config=None, total_steps=200_000, seed=0, metrics_path=None):
    """Plain PPO on a single-agent env (``reset``/``step`` on flat vectors).

    The env needs ``observation_space`` and ``action_space`` boxes;
    ``info["power_total_w"]`` and ``info["load_raw"]`` are logged if present.
    """
    config = config or TrainConfig()
    env, eval_env = env_factory(), env_factory()
    rng = np.random.default_rng(seed)
    obs_space, act_space = env.observation_space, env.action_space
    d, a = obs_space.shape[0], act_space.shape[0]
    actor = GaussianActor(d, a, rng, config.hidden, act_space.high)
    critic = Critic(d, rng, config.hidden)
    opt = Adam(actor.parameters + critic.parameters, config.learning_rate)
    log = MetricsLog(metrics_path)
    lr_fn = lambda k: learning_rate(config, k, total_steps)  # noqa: E731
    obs = env.reset(seed)
    steps = 0
    for update in range(1, config.n_updates(total_steps) + 1):
        buf = RolloutBuffer(config.num_steps, 1, d, a, d)
        while not buf.full:
            x = obs_space.normalize(obs)
            z, logp = actor.sample(x, rng.standard_normal(a))
            v = critic.value(x)
            next_obs, reward, done, _ = env.step(actor.to_env(z))
            buf.add(x[None], x[None], z[None], logp, reward, v, done)
            steps += 1
            obs = env.reset() if done else next_obs
        buf.finish([critic.value(obs_space.normalize(obs))], config.gamma, config.gae_lambda)
        diag = ppo_update(buf.agent(0), actor, critic, opt, config, rng, lr_fn)
        if update % config.eval_every == 0:
            o = eval_env.reset(seed)
            score = power = load = 0.0
            for _ in range(config.eval_episode_length):
                o, r, done, info = eval_env.step(actor.to_env(actor.mean(obs_space.normalize(o))))
                score += float(r)
                power += info.get("power_total_w", 0.0)
                load += info.get("load_raw", 0.0)
                if done:
                    break
            log.append(dict(update=update, step=steps, score=score, power_sum=power, load_raw=load,
                            kl=diag["approx_kl"], clipfrac=diag["clipfrac"]))
    return TrainResult(FarmPolicy([actor], obs_space, "ppo"), log.rows, [critic])


__all__ = ["FarmPolicy", "TrainResult", "train_ippo", "train_mappo", "train_ppo", "run_episode",
           "METRIC_COLUMNS", "TrainConfig"]

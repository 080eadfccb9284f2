"""Clipped-surrogate PPO updates."""

from dataclasses import dataclass

import numpy as np

from .autograd import Tensor
from .gae import gae
from .nn import clip_grad_norm


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 3e-4
    anneal_lr: bool = True  # linear decay toward 0 over all gradient steps
    gamma: float = 0.99
    gae_lambda: float = 0.95
    num_steps: int = 2048
    update_epochs: int = 10
    minibatch_size: int = 64
    clip_coef: float = 0.2
    vf_coef: float = 0.5
    ent_coef: float = 0.0
    max_grad_norm: float = 0.5
    norm_adv: bool = True
    hidden: tuple = (64, 64)
    eval_every: int = 5  # updates between deterministic evaluations
    eval_episode_length: int = 150

    @property
    def num_minibatches(self):
        return max(1, self.num_steps // self.minibatch_size)

    def n_updates(self, total_steps):
        """Rollout/update cycles needed to collect at least ``total_steps``."""
        return max(1, -(-int(total_steps) // self.num_steps))

    def gradient_steps(self, total_steps):
        return self.n_updates(total_steps) * self.update_epochs * self.num_minibatches


def learning_rate(config, step, total_steps):
    """Learning rate for gradient step ``step`` (0-based) of the whole run."""
    if not config.anneal_lr:
        return config.learning_rate
    return config.learning_rate * (1.0 - step / config.gradient_steps(total_steps))


class RolloutBuffer:
    """Fixed-length per-agent trajectories: arrays are (num_steps, n_agents, ...)."""

    def __init__(self, num_steps, n_agents, obs_dim, act_dim, critic_dim):
        self.num_steps = num_steps
        self.obs = np.zeros((num_steps, n_agents, obs_dim))
        self.critic_obs = np.zeros((num_steps, n_agents, critic_dim))
        self.actions = np.zeros((num_steps, n_agents, act_dim))
        self.logp = np.zeros((num_steps, n_agents))
        self.rewards = np.zeros((num_steps, n_agents))
        self.values = np.zeros((num_steps, n_agents))
        self.dones = np.zeros((num_steps, n_agents))
        self.advantages = None
        self.returns = None
        self.pos = 0

    @property
    def full(self):
        return self.pos == self.num_steps

    def add(self, obs, critic_obs, actions, logp, rewards, values, done):
        t = self.pos
        self.obs[t], self.critic_obs[t], self.actions[t] = obs, critic_obs, actions
        self.logp[t], self.rewards[t], self.values[t] = logp, rewards, values
        self.dones[t] = float(done)
        self.pos += 1

    def finish(self, last_values, gamma, lam):
        self.advantages, self.returns = gae(self.rewards, self.values, self.dones,
                                            np.asarray(last_values, dtype=float), gamma, lam)

    def agent(self, i):
        return dict(obs=self.obs[:, i], critic_obs=self.critic_obs[:, i], actions=self.actions[:, i],
                    logp=self.logp[:, i], advantages=self.advantages[:, i],
                    returns=self.returns[:, i])


def policy_loss(actor, obs, actions, old_logp, advantages, config):
    """Negative clipped surrogate plus diagnostics (approx KL, clip fraction)."""
    if config.norm_adv and len(advantages) > 1:
        advantages = (advantages - advantages.mean()) / (advantages.std() + 1e-8)
    new_logp = actor.log_prob(obs, actions)
    logratio = new_logp - old_logp
    ratio = logratio.exp()
    adv = Tensor(advantages)
    surrogate = (ratio * adv).minimum(ratio.clip(1.0 - config.clip_coef, 1.0 + config.clip_coef) * adv)
    loss = -surrogate.mean()
    if config.ent_coef:
        loss = loss - config.ent_coef * actor.entropy()
    r, lr_ = ratio.data, logratio.data
    stats = dict(approx_kl=float(np.mean((r - 1.0) - lr_)),
                 clipfrac=float(np.mean(np.abs(r - 1.0) > config.clip_coef)))
    return loss, stats


def value_loss(critic, obs, returns):
    return ((critic(obs) - returns).square()).mean() * 0.5


def _apply(optimizer, loss, lr, max_grad_norm):
    optimizer.zero_grad()
    try:
        loss.backward()
    except FloatingPointError as exc:
        raise FloatingPointError(f"PPO loss became non-finite (lr={lr:.3g}): {exc}") from exc
    clip_grad_norm(optimizer.params, max_grad_norm)
    optimizer.lr = lr
    optimizer.step()


def ppo_update(batch, actor, critic, optimizer, config, rng, lr_fn=None):
    """Epochs of minibatch PPO on one agent's batch with a joint actor-critic optimizer.

    ``batch`` holds ``obs``, ``critic_obs``, ``actions``, ``logp``,
    ``advantages`` and ``returns``; ``lr_fn(k)`` gives the learning rate of
    the optimizer's k-th step. Returns mean diagnostics.
    """
    lr_fn = lr_fn or (lambda k: config.learning_rate)
    n = len(batch["logp"])
    size = min(config.minibatch_size, n)
    diag = dict(policy_loss=[], value_loss=[], approx_kl=[], clipfrac=[])
    for _ in range(config.update_epochs):
        order = rng.permutation(n)
        for start in range(0, n - size + 1, size):
            idx = order[start:start + size]
            pg, stats = policy_loss(actor, batch["obs"][idx], batch["actions"][idx],
                                    batch["logp"][idx], batch["advantages"][idx], config)
            v = value_loss(critic, batch["critic_obs"][idx], batch["returns"][idx])
            _apply(optimizer, pg + v * config.vf_coef, lr_fn(optimizer.t), config.max_grad_norm)
            diag["policy_loss"].append(float(pg.data))
            diag["value_loss"].append(float(v.data))
            diag["approx_kl"].append(stats["approx_kl"])
            diag["clipfrac"].append(stats["clipfrac"])
    return {k: float(np.mean(v)) for k, v in diag.items()}


def mappo_update(batches, actors, critic, actor_opts, critic_opt, config, rng, lr_fn=None):
    """PPO epochs for several actors sharing one critic.

    Each minibatch step updates every actor on its own samples, then the
    critic on the union of all agents' samples at the same indices.
    """
    lr_fn = lr_fn or (lambda k: config.learning_rate)
    n = len(batches[0]["logp"])
    size = min(config.minibatch_size, n)
    diag = dict(policy_loss=[], value_loss=[], approx_kl=[], clipfrac=[])
    critic_obs = np.concatenate([b["critic_obs"] for b in batches])
    returns = np.concatenate([b["returns"] for b in batches])
    for _ in range(config.update_epochs):
        order = rng.permutation(n)
        for start in range(0, n - size + 1, size):
            idx = order[start:start + size]
            for actor, opt, b in zip(actors, actor_opts, batches):
                pg, stats = policy_loss(actor, b["obs"][idx], b["actions"][idx], b["logp"][idx],
                                        b["advantages"][idx], config)
                _apply(opt, pg, lr_fn(opt.t), config.max_grad_norm)
                diag["policy_loss"].append(float(pg.data))
                diag["approx_kl"].append(stats["approx_kl"])
                diag["clipfrac"].append(stats["clipfrac"])
            rows = np.concatenate([idx + k * n for k in range(len(batches))])
            v = value_loss(critic, critic_obs[rows], returns[rows])
            _apply(critic_opt, v * config.vf_coef, lr_fn(critic_opt.t), config.max_grad_norm)
            diag["value_loss"].append(float(v.data))
    return {k: float(np.mean(v)) for k, v in diag.items()}

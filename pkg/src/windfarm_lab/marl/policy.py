"""Gaussian actors and value critics."""

import numpy as np

from .autograd import Tensor, parameter
from .nn import MLP

LOG_2PI = np.log(2.0 * np.pi)


class GaussianActor:
    """Diagonal Gaussian over unit-scale actions with a state-independent log-std.

    The environment action is ``clip(scale * z, -scale, scale)`` for a sample
    ``z``; log-probabilities refer to ``z`` before clipping.
    """

    def __init__(self, obs_dim, act_dim, rng, hidden=(64, 64), action_scale=1.0):
        self.net = MLP((obs_dim, *hidden, act_dim), rng, out_gain=0.01)
        self.log_std = parameter(np.zeros(act_dim))
        self.action_scale = np.asarray(action_scale, dtype=float)

    @property
    def parameters(self):
        return self.net.parameters + [self.log_std]

    def mean(self, obs):
        return self.net.forward_numpy(obs)

    def sample(self, obs, noise):
        """Pre-clip sample ``z`` and its log-probability for standard-normal ``noise``."""
        mu = self.mean(obs)
        std = np.exp(self.log_std.data)
        z = mu + std * noise
        logp = -0.5 * np.sum(noise**2 + 2.0 * self.log_std.data + LOG_2PI, axis=-1)
        return z, logp

    def to_env(self, z):
        return np.clip(self.action_scale * z, -self.action_scale, self.action_scale)

    def log_prob(self, obs, z):
        """Graph-building log-density of ``z`` (N, act_dim) under the policy at ``obs``."""
        mu = self.net(obs)
        std = self.log_std.exp()
        diff = (Tensor(z) - mu) / std
        per_dim = diff.square() * -0.5 - self.log_std - 0.5 * LOG_2PI
        return per_dim.sum(axis=1)

    def entropy(self):
        return (self.log_std + 0.5 * (1.0 + LOG_2PI)).sum()


class Critic:
    def __init__(self, obs_dim, rng, hidden=(64, 64)):
        self.net = MLP((obs_dim, *hidden, 1), rng, out_gain=1.0)

    @property
    def parameters(self):
        return self.net.parameters

    def value(self, obs):
        return self.net.forward_numpy(obs)[..., 0]

    def __call__(self, obs):
        return self.net(obs).reshape(-1)

import numpy as np

from ..errors import ContractViolation


def gae(rewards, values, dones, last_value, gamma=0.99, lam=0.95):
    """Generalized advantage estimates and returns.

    ``dones[t]`` marks that the episode ended after step ``t``; the
    bootstrap and the advantage recursion are cut there. ``last_value`` is
    the value of the state following the final step.
    """
    rewards = np.asarray(rewards, dtype=float)
    values = np.asarray(values, dtype=float)
    dones = np.asarray(dones, dtype=float)
    if not (rewards.shape == values.shape == dones.shape):
        raise ContractViolation("rewards, values and dones must have the same length")
    n = len(rewards)
    adv = np.zeros_like(rewards)
    next_adv = 0.0
    next_value = last_value
    for t in range(n - 1, -1, -1):
        keep = 1.0 - dones[t]
        delta = rewards[t] + gamma * next_value * keep - values[t]
        next_adv = delta + gamma * lam * keep * next_adv
        adv[t] = next_adv
        next_value = values[t]
    return adv, adv + values

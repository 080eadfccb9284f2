import numpy as np


def actuation_budget_check(used_s, elapsed_s, required_s, step_s, cap=0.10):
    """Whether an actuation needing ``required_s`` seconds fits the duty cycle.

    Accepted iff ``(used + required) / (elapsed + step) <= cap``. A request
    needing no time is always accepted, and so is the first actuation of an
    episode (``used == 0``) since the ratio is undefined that early.
    """
    if required_s <= 0:
        return True
    if used_s <= 0:
        return True
    return (used_s + required_s) <= cap * (elapsed_s + step_s) + 1e-12


class ActuationBudget:
    """Per-agent actuating time against elapsed episode time."""

    def __init__(self, n_agents, step_s, cap=0.10):
        self.step_s = float(step_s)
        self.cap = cap
        self.used_s = np.zeros(n_agents)
        self.elapsed_s = 0.0

    def gate(self, required_s):
        """Accept/reject each agent's request and charge accepted ones.

        Also advances the episode clock by one step. Returns a boolean mask.
        """
        accepted = np.array([
            actuation_budget_check(u, self.elapsed_s, r, self.step_s, self.cap)
            for u, r in zip(self.used_s, required_s)
        ])
        self.used_s = self.used_s + np.where(accepted, required_s, 0.0)
        self.elapsed_s += self.step_s
        return accepted

    @property
    def fraction(self):
        if self.elapsed_s <= 0:
            return np.zeros_like(self.used_s)
        return self.used_s / self.elapsed_s

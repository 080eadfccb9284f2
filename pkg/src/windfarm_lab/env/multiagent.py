"""Per-agent (parallel and agent-cycle) and centralized views of a FarmEnv."""

import numpy as np

from ..errors import ContractViolation


class DecFarmEnv:
    """Simultaneous-move interface keyed by agent name.

    ``reset`` returns ``{agent: obs}``; ``step`` takes ``{agent: action}`` and
    returns ``(obs, rewards, terminations, infos)`` dicts. ``state()`` is the
    global observation (all local observations plus the free-stream wind).
    """

    def __init__(self, core):
        self.core = core
        self.agents = [f"turbine_{i}" for i in range(core.n_agents)]
        self.possible_agents = list(self.agents)
        self._obs = None

    @property
    def n_agents(self):
        return self.core.n_agents

    def observation_space(self, agent=None):
        return self.core.observation_space

    def action_space(self, agent=None):
        return self.core.action_space

    @property
    def state_space(self):
        return self.core.global_observation_space

    def _split(self, arr):
        return {a: arr[i] for i, a in enumerate(self.agents)}

    def reset(self, seed=None):
        self._obs = self.core.reset(seed)
        return self._split(self._obs)

    def step(self, actions):
        missing = set(self.agents) - set(actions)
        if missing:
            raise ContractViolation(f"missing actions for {sorted(missing)}")
        joint = np.stack([np.atleast_1d(np.asarray(actions[a], dtype=float)) for a in self.agents])
        self._obs, rewards, done, info = self.core.step(joint)
        infos = {a: dict(info, rejected=bool(info["rejected"][i]),
                         budget_frac=info[f"budget_frac_agent_{i}"])
                 for i, a in enumerate(self.agents)}
        return self._split(self._obs), self._split(rewards), {a: done for a in self.agents}, infos

    def state(self):
        return self.core.global_observation(self._obs)

    def close(self):
        self.core.close()


class AgentCycleEnv:
    """Turn-based view: agents act one at a time, the farm steps after the last.

    Typical loop::

        env.reset(seed)
        for agent in env.agent_iter():
            obs, reward, done, info = env.last()
            env.step(None if done else policy(obs))
    """

    def __init__(self, dec):
        self.dec = dec
        self.agents = dec.agents

    def reset(self, seed=None):
        obs = self.dec.reset(seed)
        self._obs = obs
        self._rewards = {a: 0.0 for a in self.agents}
        self._dones = {a: False for a in self.agents}
        self._infos = {a: {} for a in self.agents}
        self._pending = {}
        self._idx = 0
        self._finished = set()

    @property
    def agent_selection(self):
        return self.agents[self._idx]

    def last(self):
        a = self.agent_selection
        return self._obs[a], self._rewards[a], self._dones[a], self._infos[a]

    def agent_iter(self, max_iter=2**62):
        for _ in range(max_iter):
            if len(self._finished) == len(self.agents):
                return
            yield self.agent_selection

    def step(self, action):
        a = self.agent_selection
        if self._dones[a]:
            if action is not None:
                raise ContractViolation("a finished agent can only step with None")
            self._finished.add(a)
        else:
            self._pending[a] = action
            if len(self._pending) == len(self.agents):
                self._obs, self._rewards, self._dones, self._infos = self.dec.step(self._pending)
                self._pending = {}
        self._idx = (self._idx + 1) % len(self.agents)


class CentralizedFarmEnv:
    """Single-controller view: one flat action vector for the whole farm.

    Observations are the global observation (``observation="global"``) or
    the flattened local observations (``"local"``); the reward is the first
    agent's (identical for every agent under the default shaper).
    """

    def __init__(self, core, observation="global"):
        if observation not in ("global", "local"):
            raise ValueError("observation must be 'global' or 'local'")
        self.core = core
        self.observation = observation

    @property
    def n_agents(self):
        return self.core.n_agents

    @property
    def observation_space(self):
        if self.observation == "local":
            box = self.core.observation_space
            return type(box)(np.tile(box.low, self.n_agents), np.tile(box.high, self.n_agents))
        return self.core.global_observation_space

    def _view(self, obs):
        if self.observation == "local":
            return np.ravel(obs)
        return self.core.global_observation(obs)

    @property
    def action_space(self):
        box = self.core.action_space
        return type(box)(np.tile(box.low, self.n_agents), np.tile(box.high, self.n_agents))

    def reset(self, seed=None):
        return self._view(self.core.reset(seed))

    def step(self, action):
        obs, rewards, done, info = self.core.step(np.asarray(action, dtype=float))
        return self._view(obs), float(rewards[0]), done, info

    def close(self):
        self.core.close()

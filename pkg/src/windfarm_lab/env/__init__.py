"""Cooperative multi-agent wind-farm control environments."""

from .budget import ActuationBudget, actuation_budget_check
from .calibration import calibrate_load_scale
from .config import EnvConfig, parse_config, read_config
from .farm_env import ACTION_BOUNDS, DirectLink, FarmEnv
from .multiagent import AgentCycleEnv, CentralizedFarmEnv, DecFarmEnv
from .registry import env_ids, make_env, parse_env_id
from .rewards import RewardShaper, combined_reward, reward_production
from .spaces import Box

"""Actor-critic learners (IPPO, MAPPO) built on a small autograd engine."""

from .autograd import Tensor, parameter
from .checkpoint import load_policy, save_policy
from .gae import gae
from .metrics import METRIC_COLUMNS, MetricsLog, read_metrics
from .nn import MLP, Adam, clip_grad_norm
from .policy import Critic, GaussianActor
from .ppo import RolloutBuffer, TrainConfig, learning_rate, mappo_update, ppo_update
from .trainers import FarmPolicy, TrainResult, run_episode, train_ippo, train_mappo, train_ppo

"""
Training yaw controllers with independent PPO
=============================================

Each turbine is one agent that nudges its own yaw by up to 5 degrees per
step, using only local measurements. All agents share one reward that
credits farm power and charges a fatigue-load penalty. Independent PPO
trains one actor and one critic per turbine.

The full setting is 200k environment steps (about 17 CPU minutes). Pass a
smaller count for a quick look::

    python demos/train_and_score.py 20480
"""

import sys
from functools import partial

import numpy as np

from windfarm_lab.bench import evaluate_score, extract_weights, grid_search_oracle
from windfarm_lab.dynamics.series import default_series
from windfarm_lab.env import make_env
from windfarm_lab.marl import run_episode, train_ippo
from windfarm_lab.wake import FreeStreamConditions, load_layout

steps = int(sys.argv[1]) if len(sys.argv) > 1 else 20480
env_id = "Dec_Turb3_Row1_Static"
factory = partial(make_env, env_id)

result = train_ippo(factory, total_steps=steps, seed=0)
print("evaluation during training (every 5 updates):")
for row in result.metrics:
    print(f"  step {row['step']:6d}  episode reward {row['score']:7.2f}  load {row['load_raw']:7.2f}")

# greedy turbines versus the learned policy on the training wind; the load
# weight is calibrated on the greedy farm, so greedy scores about zero here
greedy = run_episode(lambda obs: np.zeros((len(obs), 1)), factory(), seed=0)
learned = run_episode(result.policy, factory(), seed=0)
oracle = grid_search_oracle(load_layout("Turb3_Row1"), FreeStreamConditions(8.0, 270.0))
gain = learned["final_power_w"] / oracle.greedy_power_w - 1.0
print(f"\nfinal yaws {np.round(learned['final_yaw'], 1)}, power gain {gain:.1%} "
      f"(oracle {oracle.gain:.1%} at yaws {oracle.yaws})")
print(f"episode reward: greedy {greedy['score']:.2f}, learned {learned['score']:.2f}")

# wind-rose weighted score over the binned default wind series
weights = extract_weights(default_series())
report = evaluate_score(result.policy, factory, weights)
print(f"\n{len(weights)} wind conditions, weighted score {report.score:.2f}")
for row in sorted(report.rows(), key=lambda r: -r["weight"])[:5]:
    print(f"  u={row['wind_speed']:5.2f}  phi={row['wind_direction']:6.1f}  "
          f"weight={row['weight']:.3f}  return={row['episode_return']:.2f}")

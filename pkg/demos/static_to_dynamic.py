"""
Carrying a policy from the fast model to the slow one
=====================================================

Training on the steady-state wake model is cheap; the dynamic simulator
adds actuator rate limits, wake travel time, meandering and sensor noise.
This script trains briefly on the static model, then runs the same policy
unchanged on the dynamic model and compares it with all-zero yaw.
The dynamic env is viewed through ``static_view`` so the policy sees the
same observation fields it was trained on.

Run with ``python demos/static_to_dynamic.py [training steps]``.
"""

import sys

from windfarm_lab.bench import compare_to_greedy, static_view
from windfarm_lab.env import make_env
from windfarm_lab.marl import train_ippo

steps = int(sys.argv[1]) if len(sys.argv) > 1 else 20480
policy = train_ippo(lambda: make_env("Dec_Turb3_Row1_Static"), total_steps=steps, seed=0).policy

# 900 steps of 3 s: 45 simulated minutes, enough for the duty-limited yaw ramp
env = static_view(make_env("Dec_Turb3_Row1_Dynamic", episode_length=900))
out = compare_to_greedy(policy, env, seed=0)
print(f"settled power gain over greedy (last 300 steps): {out['tail_gain']:+.1%}")
print(f"energy gain over the whole episode:              {out['energy_gain']:+.1%}")
print(f"mean load change:                                {out['load_change']:+.1%}")
print("final yaws:", out["final_yaw"].round(1))

print("\nfarm power every 60 steps [MW]: policy / greedy")
for k in range(0, 900, 60):
    print(f"  {3 * k:5d} s  {out['power'][k] / 1e6:.3f} / {out['greedy_power'][k] / 1e6:.3f}")

"""
How long a yaw move takes to reach the next turbine
===================================================

The dynamic simulator advects each wake downstream at 80% of the wind
speed. Turning the front rotor therefore changes nothing downstream until
the disturbance has travelled the 504 m to the second rotor, about 79 s
or 26 steps of 3 s at 8 m/s. The yaw drive itself moves at 0.3 deg/s.

Run with ``python demos/dynamic_wake_delay.py``.
"""

import numpy as np

from windfarm_lab.dynamics.simulator import DynamicFarm, advection_lag, constant_inflow
from windfarm_lab.wake import FreeStreamConditions, load_layout

layout = load_layout("Turb3_Row1")
wind = FreeStreamConditions(8.0, 270.0)
print(f"expected lag to turbine 2: {advection_lag(504.0, 8.0):.2f} s")

# two identical farms with the same noise seed; only one turns its front rotor
still = DynamicFarm(layout, constant_inflow(wind), seed=0)
turning = DynamicFarm(layout, constant_inflow(wind), seed=0)
hold = np.tile([0.0, 0.0, 1.0], (3, 1))  # yaw, pitch, torque targets
turn = hold.copy()
turn[0, 0] = 20.0
for _ in range(10):
    still.step(hold)
    turning.step(hold)

print("\nstep  time[s]  front yaw  rotor speed change at turbine 2 [m/s]")
for k in range(1, 61):
    still.step(hold)
    turning.step(turn)
    change = turning.rotor_speed[1] - still.rotor_speed[1]
    if k % 4 == 0 or abs(k - 26) <= 1:
        print(f"{k:4d}  {3 * k:7d}  {turning.actuators.current[0, 0]:9.1f}  {change:+.4f}")

# farm power once the front rotor has settled and the wake has arrived
print(f"\nfarm power, all facing the wind: {still.power_w.sum() / 1e6:.3f} MW")
print(f"farm power, front rotor at 20 deg: {turning.power_w.sum() / 1e6:.3f} MW")

"""
Running the simulator behind a socket
=====================================

The environment can drive its dynamic simulator through a framed,
checksummed, lock-step protocol instead of a direct call. Here the
simulator is served on a local TCP port from a thread, and an environment
connects to it. A loopback run shows the protocol is exactly transparent.

Run with ``python demos/cosim_bridge.py``.
"""

import socket
import threading

import numpy as np

from windfarm_lab.bridge import decode, encode, measure_frame, serve
from windfarm_lab.dynamics.simulator import DynamicFarm, constant_inflow
from windfarm_lab.env import EnvConfig, FarmEnv
from windfarm_lab.wake import FreeStreamConditions, load_layout

# one frame on the wire: header, float64 payload, CRC32
frame = measure_frame(7, np.arange(36.0).reshape(3, 12))
raw = encode(frame)
print(f"measure frame for 3 turbines: {len(raw)} bytes, magic {raw[:4]!r}")
assert decode(raw) == frame

# serve one episode on a free port
with socket.socket() as probe:
    probe.bind(("127.0.0.1", 0))
    endpoint = f"tcp://127.0.0.1:{probe.getsockname()[1]}"
layout = load_layout("Turb3_Row1")
inflow = constant_inflow(FreeStreamConditions(8.0, 270.0))
ready = threading.Event()
server = threading.Thread(target=serve, args=(endpoint, lambda i: (DynamicFarm(layout, inflow, seed=1), 1)),
                          kwargs=dict(max_sessions=1, ready=ready), daemon=True)
server.start()
ready.wait()

cfg = EnvConfig(layout="Turb3_Row1", simulator="dynamic", episode_length=40)
remote = FarmEnv(cfg.replace(bridge_endpoint=endpoint))
remote.reset(1)
for k in range(40):
    _, reward, done, info = remote.step(np.tile([2.0, 0.0, 0.0], (3, 1)))
    if k % 10 == 9:
        print(f"step {k + 1:2d}: farm power {info['power_total_w'] / 1e6:.3f} MW, reward {reward[0]:.3f}")
remote.close()
server.join()

# the same episode directly and through an in-process socket pair
traces = []
for endpoint in (None, "loopback"):
    env = FarmEnv(cfg.replace(bridge_endpoint=endpoint))
    env.reset(1)
    traces.append([env.step(np.tile([2.0, 0.0, 0.0], (3, 1)))[3]["power_total_w"] for _ in range(40)])
    env.close()
print("direct and loopback bridge traces identical:", traces[0] == traces[1])

import socket
import struct
import threading
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from windfarm_lab.bridge import (
    BadChecksum,
    BadFrameType,
    BadLength,
    BadMagic,
    BadVersion,
    Channel,
    EnvironmentSession,
    EstimatorNotReady,
    FreeStreamEstimator,
    ProtocolError,
    SessionTimeout,
    SimulatorSession,
    command_frame,
    decode,
    encode,
    estimate_freestream,
    measure_frame,
    run_simulator,
    serve,
)
from windfarm_lab.dynamics.simulator import DynamicFarm, constant_inflow
from windfarm_lab.env import EnvConfig, FarmEnv
from windfarm_lab.wake import FreeStreamConditions, row_layout


def random_frame(rng, m):
    if rng.random() < 0.5:
        return measure_frame(int(rng.integers(0, 2**63)), rng.standard_normal((m, 12)) * 1e6)
    return command_frame(int(rng.integers(0, 2**63)), rng.standard_normal((m, 3)))


# framing -----------------------------------------------------------------
def test_measure_frame_size():
    frame = measure_frame(5, np.zeros((3, 12)))
    data = encode(frame)
    assert len(data) == 16 + 288 + 4
    assert data[:4] == b"WFCB"
    assert struct.unpack_from("<4sBBHQ", data) == (b"WFCB", 1, 1, 3, 5)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.sampled_from([1, 7, 91]))
def test_roundtrip_bit_exact(seed, m):
    frame = random_frame(np.random.default_rng(seed), m)
    assert decode(encode(frame)) == frame
    assert encode(decode(encode(frame))) == encode(frame)


def test_special_floats_survive():
    vals = np.array([[np.nan, -0.0, np.inf]])
    out = decode(encode(command_frame(1, vals))).payload
    assert out.tobytes() == vals.astype("<f8").tobytes()


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), data=st.data())
def test_any_single_byte_corruption_rejected(seed, data):
    raw = bytearray(encode(random_frame(np.random.default_rng(seed), 3)))
    pos = data.draw(st.integers(0, len(raw) - 1))
    raw[pos] ^= data.draw(st.integers(1, 255))
    with pytest.raises(ValueError):
        decode(bytes(raw))


def test_typed_decode_errors():
    good = bytearray(encode(measure_frame(1, np.ones((2, 12)))))
    cases = [(0, BadMagic), (4, BadVersion), (5, BadFrameType)]
    for pos, err in cases:
        bad = bytearray(good)
        bad[pos] = 99
        with pytest.raises(err):
            decode(bytes(bad))
    with pytest.raises(BadLength):
        decode(bytes(good[:-1]))
    with pytest.raises(BadLength):
        decode(bytes(good[:10]))
    bad = bytearray(good)
    bad[30] ^= 1
    with pytest.raises(BadChecksum):
        decode(bytes(bad))


def test_turbine_count_limit():
    with pytest.raises(ValueError):
        command_frame(0, np.zeros((70000, 3)))


# sessions ----------------------------------------------------------------
def pair(timeout=5.0):
    a, b = socket.socketpair()
    return SimulatorSession(Channel(a, timeout)), EnvironmentSession(Channel(b, timeout))


def test_stale_command_rejected():
    sim, env = pair()
    sim.send_measure(0, np.zeros((1, 12)))
    env.recv_measure()
    sim.send_measure(1, np.zeros((1, 12)))
    env.channel.send(command_frame(0, np.zeros((1, 3))))  # answers the old step
    with pytest.raises(ProtocolError):
        sim.recv_command()


def test_out_of_order_measure_rejected():
    sim, env = pair()
    sim.send_measure(0, np.zeros((1, 12)))
    env.recv_measure()
    sim.channel.send(measure_frame(5, np.zeros((1, 12))))
    with pytest.raises(ProtocolError):
        env.recv_measure()
    with pytest.raises(ProtocolError):
        sim.send_measure(0, np.zeros((1, 12)))


def test_timeout_aborts():
    _, env = pair(timeout=0.05)
    with pytest.raises(SessionTimeout):
        env.recv_measure()


class DelayedSocket:
    """Socket wrapper that sleeps a random few milliseconds before each write."""

    def __init__(self, sock, rng):
        self.sock, self.rng = sock, rng

    def sendall(self, data):
        time.sleep(self.rng.uniform(0, 0.003))
        # deliver in random-sized pieces
        i = 0
        while i < len(data):
            j = i + int(self.rng.integers(1, 64))
            self.sock.sendall(data[i:j])
            i = j

    def recv(self, n):
        return self.sock.recv(n)

    def settimeout(self, t):
        self.sock.settimeout(t)

    def close(self):
        self.sock.close()


def test_lock_step_under_delayed_transport():
    a, b = socket.socketpair()
    rng = np.random.default_rng(0)
    sim = SimulatorSession(Channel(DelayedSocket(a, np.random.default_rng(1)), 5.0))
    env = EnvironmentSession(Channel(DelayedSocket(b, np.random.default_rng(2)), 5.0))
    farm = DynamicFarm(row_layout(2), constant_inflow(FreeStreamConditions(8.0, 270.0)), seed=0)
    thread = threading.Thread(target=run_simulator, args=(sim, farm, 0, 30))
    thread.start()
    steps = []
    while True:
        meas = env.recv_measure()
        if meas is None:
            break
        steps.append(env.step)
        env.send_command(np.tile([rng.uniform(-5, 5), 0.0, 1.0], (2, 1)))
    thread.join(5)
    assert steps == list(range(31))


def trajectory(env, seed, n=25):
    rng = np.random.default_rng(seed)
    out = [env.reset(seed)]
    for _ in range(n):
        obs, r, done, info = env.step(rng.uniform(env.action_space.low, env.action_space.high, (env.n_agents, 3)))
        out += [obs, r, [info["power_total_w"], info["load_raw"]]]
    return out


def test_loopback_bridge_matches_direct_bit_exactly():
    cfg = EnvConfig(layout="Turb3_Row1", simulator="dynamic", episode_length=25, duty_cap=0.5)
    direct = trajectory(FarmEnv(cfg), 11)
    bridged = trajectory(FarmEnv(cfg.replace(bridge_endpoint="loopback")), 11)
    assert all(np.array_equal(np.asarray(a), np.asarray(b)) for a, b in zip(direct, bridged))


def test_tcp_bridge_serves_episode_and_close_terminates():
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    endpoint = f"tcp://127.0.0.1:{port}"
    ready = threading.Event()
    layout = row_layout(2)

    def factory(i):
        inflow = constant_inflow(FreeStreamConditions(8.0, 270.0))
        return DynamicFarm(layout, inflow, seed=3), 3

    # the simulator ends the session after 4 commands, before the env's own horizon
    server = threading.Thread(
        target=lambda: serve(endpoint, lambda i: factory(i), max_sessions=1, ready=ready), daemon=True)
    import windfarm_lab.bridge.session as session_mod

    original = session_mod.run_simulator
    session_mod.run_simulator = lambda s, f, seed=None, max_steps=None: original(s, f, seed, 4)
    try:
        server.start()
        ready.wait(5)
        env = FarmEnv(EnvConfig(layout="Turb2_Row1", simulator="dynamic", episode_length=50,
                                bridge_endpoint=endpoint))
        env.reset(0)
        done, k = False, 0
        while not done:
            _, _, done, _ = env.step(np.zeros((2, 3)))
            k += 1
        assert k == 5 and env.terminated
    finally:
        server.join(5)
        session_mod.run_simulator = original


# free-stream estimation --------------------------------------------------
def test_estimator_examples():
    assert estimate_freestream([[7.5]], [[268.0]]) == (7.5, 268.0)
    u = np.array([[8.0, 6.0], [8.0, 6.0]])
    phi = np.array([[270.0, 10.0], [272.0, 10.0]])
    assert estimate_freestream(u, phi) == (8.0, 271.0)
    with pytest.raises(EstimatorNotReady):
        FreeStreamEstimator(2).estimate()


def test_estimator_direction_wraps_north():
    est = FreeStreamEstimator(1, buffer_window=2)
    est.push([8.0], [358.0])
    est.push([8.0], [4.0])
    assert est.estimate()[1] == pytest.approx(1.0)


def test_estimator_window_statistics():
    rng = np.random.default_rng(0)
    sigma, n = 0.5, 20
    misses = 0
    for _ in range(200):
        est = FreeStreamEstimator(1, buffer_window=n)
        for _ in range(3 * n):
            est.push([8.0 + sigma * rng.standard_normal()], [270.0])
        u, _ = est.estimate()
        misses += abs(u - 8.0) > 2 * sigma / np.sqrt(n)
    assert misses / 200 < 0.1  # about 5 % expected outside two standard errors

"""Lock-step sessions over a stream transport.

The simulator sends ``MEASURE(k)``; the environment answers ``COMMAND(k)``
with the same step index; the simulator advances and sends ``MEASURE(k+1)``.
Either side may send ``CLOSE`` instead, which ends the session.
"""

import socket
import threading

import numpy as np

from ..dynamics.simulator import DynamicFarm
from .frames import (
    CRC,
    HEADER,
    FrameType,
    close_frame,
    command_frame,
    decode,
    encode,
    measure_frame,
    parse_header,
    payload_size,
)

DEFAULT_TIMEOUT_S = 30.0


class ProtocolError(RuntimeError):
    pass


class SessionTimeout(ProtocolError):
    pass


class SessionClosed(ProtocolError):
    pass


class Channel:
    """Frame reader/writer over anything with ``sendall`` and ``recv``."""

    def __init__(self, transport, timeout=DEFAULT_TIMEOUT_S):
        self.transport = transport
        if hasattr(transport, "settimeout"):
            transport.settimeout(timeout)

    def send(self, frame):
        try:
            self.transport.sendall(encode(frame))
        except socket.timeout as exc:
            raise SessionTimeout("timed out sending a frame") from exc
        except OSError as exc:
            raise SessionClosed(f"transport failed while sending: {exc}") from exc

    def _read_exact(self, n):
        chunks = []
        while n:
            try:
                chunk = self.transport.recv(n)
            except socket.timeout as exc:
                raise SessionTimeout("timed out waiting for a frame") from exc
            except OSError as exc:
                raise SessionClosed(f"transport failed while receiving: {exc}") from exc
            if not chunk:
                raise SessionClosed("peer closed the transport")
            chunks.append(chunk)
            n -= len(chunk)
        return b"".join(chunks)

    def recv(self):
        head = self._read_exact(HEADER.size)
        kind, m, _ = parse_header(head)
        rest = self._read_exact(payload_size(kind, m) + CRC.size)
        return decode(head + rest)

    def close(self):
        try:
            self.transport.close()
        except OSError:
            pass


class SimulatorSession:
    """Simulator side: publishes measurements, waits for matching commands."""

    def __init__(self, channel):
        self.channel = channel
        self.step = None

    def send_measure(self, step, measures):
        if self.step is not None and step <= self.step:
            raise ProtocolError(f"measure step {step} does not follow {self.step}")
        self.step = step
        self.channel.send(measure_frame(step, measures))

    def recv_command(self):
        """Targets (M, 3) for the current step, or None if the peer closed."""
        frame = self.channel.recv()
        if frame.kind == FrameType.CLOSE:
            return None
        if frame.kind != FrameType.COMMAND:
            raise ProtocolError(f"expected a command frame, got {frame.kind.name}")
        if frame.step != self.step:
            raise ProtocolError(f"command for step {frame.step} while at step {self.step}")
        return frame.payload

    def close(self):
        try:
            self.channel.send(close_frame(0 if self.step is None else self.step))
        except ProtocolError:
            pass
        self.channel.close()


class EnvironmentSession:
    """Environment side: receives measurements, replies with commands."""

    def __init__(self, channel):
        self.channel = channel
        self.step = None
        self.closed = False

    def recv_measure(self):
        """(M, 12) measurements for the next step, or None once closed."""
        frame = self.channel.recv()
        if frame.kind == FrameType.CLOSE:
            self.closed = True
            return None
        if frame.kind != FrameType.MEASURE:
            raise ProtocolError(f"expected a measure frame, got {frame.kind.name}")
        if self.step is not None and frame.step != self.step + 1:
            raise ProtocolError(f"measure step {frame.step} out of order after {self.step}")
        self.step = frame.step
        return frame.payload

    def send_command(self, targets):
        if self.step is None or self.closed:
            raise ProtocolError("no measurement to answer")
        self.channel.send(command_frame(self.step, targets))

    def close(self):
        if not self.closed:
            self.closed = True
            try:
                self.channel.send(close_frame(self.step or 0))
            except ProtocolError:
                pass
        self.channel.close()


def run_simulator(session, farm, seed=None, max_steps=None):
    """Drive ``farm`` (a DynamicFarm) from commands until closed.

    Returns the number of steps simulated.
    """
    k = 0
    try:
        session.send_measure(k, farm.reset(seed))
        while True:
            targets = session.recv_command()
            # the last measurement is answered before closing, keeping lock-step
            if targets is None or (max_steps is not None and k >= max_steps):
                return k
            k += 1
            session.send_measure(k, farm.step(targets))
    except SessionClosed:
        return k
    finally:
        session.close()


def parse_endpoint(endpoint):
    """``tcp://host:port`` -> (AF_INET, (host, port)); ``unix:/path`` -> (AF_UNIX, path)."""
    if endpoint.startswith("tcp://"):
        host, _, port = endpoint[len("tcp://"):].rpartition(":")
        return socket.AF_INET, (host or "127.0.0.1", int(port))
    if endpoint.startswith("unix:"):
        return socket.AF_UNIX, endpoint[len("unix:"):]
    raise ValueError(f"unsupported endpoint {endpoint!r}; use tcp://host:port or unix:/path")


def connect(endpoint, timeout=DEFAULT_TIMEOUT_S):
    family, address = parse_endpoint(endpoint)
    sock = socket.socket(family, socket.SOCK_STREAM)
    sock.settimeout(timeout)
    sock.connect(address)
    return EnvironmentSession(Channel(sock, timeout))


def serve(endpoint, farm_factory, max_sessions=None, timeout=DEFAULT_TIMEOUT_S, ready=None):
    """Accept connections on ``endpoint`` and run one farm episode per connection.

    ``farm_factory(session_index)`` returns ``(farm, seed)``. ``ready`` (an
    optional threading.Event) is set once the socket is listening.
    """
    family, address = parse_endpoint(endpoint)
    server = socket.socket(family, socket.SOCK_STREAM)
    if family == socket.AF_INET:
        server.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    server.bind(address)
    server.listen()
    if ready is not None:
        ready.set()
    count = 0
    try:
        while max_sessions is None or count < max_sessions:
            conn, _ = server.accept()
            farm, seed = farm_factory(count)
            run_simulator(SimulatorSession(Channel(conn, timeout)), farm, seed)
            count += 1
    finally:
        server.close()
    return count


class BridgeLink:
    """Simulator link that goes through the framed protocol.

    With ``endpoint="loopback"`` every episode starts an in-process simulator
    thread on a socket pair, built from the environment's layout, inflow and
    seed, so results match the direct link exactly. Any other endpoint
    connects to an external simulator, which then owns the inflow.
    """

    def __init__(self, layout, config, endpoint, timeout=DEFAULT_TIMEOUT_S):
        self.layout = layout
        self.config = config
        self.endpoint = endpoint
        self.timeout = timeout
        self.session = None
        self.thread = None

    def open(self, inflow, seed):
        self.close()
        if self.endpoint == "loopback":
            sim_sock, env_sock = socket.socketpair()
            c = self.config
            farm = DynamicFarm(self.layout, inflow, seed=seed, dt=c.dynamic_step_s,
                               yaw_rate=c.yaw_rate, pitch_rate=c.pitch_rate,
                               torque_rate=c.torque_rate)
            sim = SimulatorSession(Channel(sim_sock, self.timeout))
            self.thread = threading.Thread(target=run_simulator, args=(sim, farm, seed), daemon=True)
            self.thread.start()
            self.session = EnvironmentSession(Channel(env_sock, self.timeout))
        else:
            self.session = connect(self.endpoint, self.timeout)
        return self.recv()

    def recv(self):
        meas = self.session.recv_measure()
        if meas is not None and meas.shape[0] != self.layout.n_turbines:
            raise ProtocolError(f"simulator reports {meas.shape[0]} turbines, "
                                f"layout has {self.layout.n_turbines}")
        return meas

    def step(self, targets):
        self.session.send_command(np.asarray(targets, dtype=float))
        return self.recv()

    def close(self):
        if self.session is not None:
            self.session.close()
            self.session = None
        if self.thread is not None:
            self.thread.join(self.timeout)
            self.thread = None

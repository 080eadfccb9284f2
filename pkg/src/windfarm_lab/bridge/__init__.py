"""Framed co-simulation protocol between an environment and a simulator process."""

from .estimator import EstimatorNotReady, FreeStreamEstimator, estimate_freestream
from .frames import (
    BadChecksum,
    BadFrameType,
    BadLength,
    BadMagic,
    BadVersion,
    DecodeError,
    Frame,
    FrameType,
    close_frame,
    command_frame,
    decode,
    encode,
    measure_frame,
)
from .session import (
    BridgeLink,
    Channel,
    EnvironmentSession,
    ProtocolError,
    SessionClosed,
    SessionTimeout,
    SimulatorSession,
    connect,
    run_simulator,
    serve,
)

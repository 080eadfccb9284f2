"""Binary framing for simulator <-> environment messages.

Layout (little-endian): magic ``b"WFCB"``, version u8, frame type u8,
turbine count u16, step u64, ``n * M`` float64 values, CRC32 (u32) of
everything before it.
"""

import struct
import zlib
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

MAGIC = b"WFCB"
VERSION = 1
HEADER = struct.Struct("<4sBBHQ")
CRC = struct.Struct("<I")
MAX_TURBINES = 0xFFFF


class FrameType(IntEnum):
    MEASURE = 1
    COMMAND = 2
    CLOSE = 3


VALUES_PER_TURBINE = {FrameType.MEASURE: 12, FrameType.COMMAND: 3, FrameType.CLOSE: 0}


class DecodeError(ValueError):
    pass


class BadMagic(DecodeError):
    pass


class BadVersion(DecodeError):
    pass


class BadFrameType(DecodeError):
    pass


class BadLength(DecodeError):
    pass


class BadChecksum(DecodeError):
    pass


@dataclass(frozen=True, eq=False)
class Frame:
    kind: FrameType
    step: int
    n_turbines: int
    payload: np.ndarray  # (n_turbines, values per turbine) float64

    def __post_init__(self):
        kind = FrameType(self.kind)
        object.__setattr__(self, "kind", kind)
        if not 0 <= self.n_turbines <= MAX_TURBINES:
            raise ValueError(f"turbine count must be in [0, {MAX_TURBINES}]")
        if not 0 <= self.step < 2**64:
            raise ValueError("step must fit in an unsigned 64-bit integer")
        shape = (self.n_turbines, VALUES_PER_TURBINE[kind])
        payload = np.asarray(self.payload, dtype="<f8").reshape(shape)
        object.__setattr__(self, "payload", payload)

    def __eq__(self, other):
        return (isinstance(other, Frame) and self.kind == other.kind and self.step == other.step
                and self.n_turbines == other.n_turbines
                and self.payload.tobytes() == other.payload.tobytes())


def measure_frame(step, measures):
    measures = np.asarray(measures, dtype=float)
    return Frame(FrameType.MEASURE, step, len(measures), measures)


def command_frame(step, targets):
    targets = np.asarray(targets, dtype=float)
    return Frame(FrameType.COMMAND, step, len(targets), targets)


def close_frame(step, n_turbines=0):
    return Frame(FrameType.CLOSE, step, n_turbines, np.zeros((n_turbines, 0)))


def payload_size(kind, n_turbines):
    return 8 * VALUES_PER_TURBINE[kind] * n_turbines


def encode(frame):
    body = HEADER.pack(MAGIC, VERSION, frame.kind, frame.n_turbines, frame.step)
    body += frame.payload.astype("<f8").tobytes()
    return body + CRC.pack(zlib.crc32(body))


def parse_header(data):
    """Validate a header and return (kind, n_turbines, step)."""
    if len(data) < HEADER.size:
        raise BadLength("truncated header")
    magic, version, kind, m, step = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagic(f"bad magic {magic!r}")
    if version != VERSION:
        raise BadVersion(f"unsupported version {version}")
    try:
        kind = FrameType(kind)
    except ValueError:
        raise BadFrameType(f"unknown frame type {kind}") from None
    return kind, m, step


def decode(data):
    data = bytes(data)
    kind, m, step = parse_header(data)
    size = payload_size(kind, m)
    if len(data) != HEADER.size + size + CRC.size:
        raise BadLength(f"expected {HEADER.size + size + CRC.size} bytes, got {len(data)}")
    (crc,) = CRC.unpack_from(data, HEADER.size + size)
    if crc != zlib.crc32(data[:HEADER.size + size]):
        raise BadChecksum("CRC mismatch")
    values = np.frombuffer(data, dtype="<f8", count=size // 8, offset=HEADER.size)
    return Frame(kind, step, m, values.copy())

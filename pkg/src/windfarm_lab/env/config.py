"""Environment configuration and the line-based ``key=value`` config format."""

from dataclasses import dataclass, fields, replace

SCENARIOS = ("I", "II", "III")
SIMULATORS = ("static", "dynamic")
CONTROLS = ("yaw", "pitch", "torque")
DEFAULT_EPISODE_LENGTH = {"I": 150, "II": 2048, "III": 150}


@dataclass(frozen=True)
class EnvConfig:
    layout: str = "Turb3_Row1"
    simulator: str = "static"
    scenario: str = "I"
    episode_length: int = None  # None -> scenario default
    discount: float = 0.99
    alpha: float = 1.0
    c_load: float = None  # None -> layout's calibrated constant
    duty_cap: float = 0.10
    seed: int = None
    controls: tuple = None  # None -> ("yaw",) static, all three dynamic
    # wind
    wind_speed: float = 8.0  # scenario I speed, scenario II Weibull scale
    wind_direction: float = None  # scenario I direction / II mean; None -> layout prevailing
    weibull_shape: float = 2.0
    direction_std: float = 5.0
    ti_inf: float = 0.06
    series_path: str = None  # scenario III; None -> shipped default series
    # time bases
    static_step_s: float = 60.0
    dynamic_step_s: float = 3.0
    yaw_rate: float = 0.3
    pitch_rate: float = 8.0
    torque_rate: float = 0.1
    buffer_window: int = 20  # free-stream estimator window, steps
    bridge_endpoint: str = None

    def __post_init__(self):
        if self.simulator not in SIMULATORS:
            raise ValueError(f"simulator must be one of {SIMULATORS}")
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario must be one of {SCENARIOS}")
        if self.episode_length is None:
            object.__setattr__(self, "episode_length", DEFAULT_EPISODE_LENGTH[self.scenario])
        if self.controls is None:
            object.__setattr__(self, "controls", ("yaw",) if self.simulator == "static" else CONTROLS)
        controls = self.controls
        if isinstance(controls, str):
            controls = tuple(c.strip() for c in controls.split(",") if c.strip())
        object.__setattr__(self, "controls", tuple(controls))
        if not self.controls or any(c not in CONTROLS for c in self.controls):
            raise ValueError(f"controls must be a non-empty subset of {CONTROLS}")
        if self.simulator == "static" and self.controls != ("yaw",):
            raise ValueError("the static simulator only supports yaw control")
        if self.episode_length < 1:
            raise ValueError("episode_length must be >= 1")
        if not 0 < self.discount < 1:
            raise ValueError("discount must lie in (0, 1)")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if not 0 < self.duty_cap <= 1:
            raise ValueError("duty_cap must lie in (0, 1]")

    @property
    def step_s(self):
        return self.static_step_s if self.simulator == "static" else self.dynamic_step_s

    def replace(self, **changes):
        return replace(self, **changes)


def _coerce(name, text):
    kinds = {f.name: f for f in fields(EnvConfig)}
    if name not in kinds:
        raise KeyError(f"unknown config key {name!r}")
    default = kinds[name].default
    if text.lower() in ("none", ""):
        return None
    if name in ("episode_length", "seed", "buffer_window"):
        return int(text)
    if name == "controls":
        return tuple(c.strip() for c in text.split(",") if c.strip())
    if isinstance(default, float) or name in ("c_load", "wind_direction"):
        return float(text)
    return text


def parse_config(text):
    """Parse ``key=value`` lines into a dict of EnvConfig overrides.

    Blank lines and ``#`` comments are ignored; dotted keys map to
    underscores (``bridge.endpoint`` -> ``bridge_endpoint``). Unknown keys
    raise ``KeyError``.
    """
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line is not key=value: {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace(".", "_")
        out[key] = _coerce(key, value)
    return out


def read_config(path):
    with open(path) as fh:
        return parse_config(fh.read())

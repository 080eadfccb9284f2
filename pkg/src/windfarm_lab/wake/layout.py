"""Farm layouts: the data type, the plain-text file format and the registry."""

from dataclasses import dataclass, field, replace
from importlib import resources

import numpy as np

from .turbine import TurbineSpec

ROW_SPACING_D = 4.0
MAX_ROW_TURBINES = 12


@dataclass(frozen=True)
class FarmLayout:
    """Turbine positions (m) plus the shared turbine model.

    ``prevailing_direction`` is the dominant meteorological wind direction of
    the site. ``c_load_static`` / ``c_load_dynamic`` are the load downscale
    constants calibrated for this layout (None when not calibrated).
    """

    name: str
    positions: np.ndarray
    turbine: TurbineSpec = field(default_factory=TurbineSpec)
    prevailing_direction: float = 270.0
    c_load_static: float = None
    c_load_dynamic: float = None

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        if len(pos) < 1:
            raise ValueError("a layout needs at least one turbine")
        if len(pos) > 1:
            diff = pos[:, None, :] - pos[None, :, :]
            dist = np.hypot(diff[..., 0], diff[..., 1])
            np.fill_diagonal(dist, np.inf)
            if dist.min() < self.turbine.rotor_diameter_m - 1e-9:
                raise ValueError(f"turbines in layout {self.name!r} closer than one rotor diameter")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def n_turbines(self):
        return len(self.positions)

    def with_positions(self, positions):
        return replace(self, positions=positions)


def row_layout(n, spacing_d=ROW_SPACING_D, turbine=None):
    """Single row of ``n`` turbines along x, facing a westerly (270 deg) wind."""
    turbine = turbine or TurbineSpec()
    x = np.arange(n) * spacing_d * turbine.rotor_diameter_m
    return FarmLayout(f"Turb{n}_Row1", np.column_stack([x, np.zeros(n)]), turbine, 270.0)


def format_layout(layout):
    header = [f"name={layout.name}", f"diameter={layout.turbine.rotor_diameter_m:g}",
              f"direction={layout.prevailing_direction:g}"]
    if layout.c_load_static is not None:
        header.append(f"c_load_static={layout.c_load_static!r}")
    if layout.c_load_dynamic is not None:
        header.append(f"c_load_dynamic={layout.c_load_dynamic!r}")
    lines = [" ".join(header)]
    lines += [f"{float(x)!r} {float(y)!r}" for x, y in layout.positions]
    return "\n".join(lines) + "\n"


def parse_layout(text):
    """Parse the layout file format.

    First non-comment line: ``name=<id> diameter=<m>`` with optional
    ``direction=<deg>``, ``c_load_static=`` and ``c_load_dynamic=`` keys.
    Then one ``x_m y_m`` pair per line.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty layout file")
    header = dict(tok.split("=", 1) for tok in lines[0].split())
    if "name" not in header or "diameter" not in header:
        raise ValueError("layout header must define name= and diameter=")
    rows = [tuple(float(v) for v in ln.split()) for ln in lines[1:]]
    if any(len(r) != 2 for r in rows):
        raise ValueError("layout rows must be 'x_m y_m'")
    turbine = TurbineSpec(rotor_diameter_m=float(header["diameter"]))
    opt = {k: float(header[k]) for k in ("c_load_static", "c_load_dynamic") if k in header}
    return FarmLayout(header["name"], np.array(rows), turbine,
                      float(header.get("direction", 270.0)), **opt)


def read_layout(path):
    with open(path) as fh:
        return parse_layout(fh.read())


def write_layout(layout, path):
    with open(path, "w") as fh:
        fh.write(format_layout(layout))


# name -> number of turbines, for the shipped layouts
REGISTERED_LAYOUTS = {
    "Ablaincourt": 7,
    "Turb16_TCRWP": 16,
    "Turb6_Row2": 6,
    "Turb16_Row5": 16,
    "Turb32_Row5": 32,
    "Ormonde": 30,
    "WMR": 35,
    "HornsRev1": 80,
    "HornsRev2": 91,
    **{f"Turb{n}_Row1": n for n in range(1, MAX_ROW_TURBINES + 1)},
}


def layout_names():
    return list(REGISTERED_LAYOUTS)


def load_layout(name):
    """Load a registered layout from the package data files."""
    if name not in REGISTERED_LAYOUTS:
        raise KeyError(f"unknown layout {name!r}; known layouts: {', '.join(REGISTERED_LAYOUTS)}")
    ref = resources.files("windfarm_lab").joinpath("data", "layouts", f"{name}.txt")
    return parse_layout(ref.read_text())

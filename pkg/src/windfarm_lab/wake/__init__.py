"""Static analytical wake engine."""

from .conditions import FreeStreamConditions, to_wind_frame, wind_axes
from .farm import (
    RotorSampleGrid,
    SteadyFarmState,
    WakeSource,
    load_proxy_static,
    FlowAccumulator,
    wake_effects,
    rotor_points_wind_frame,
    solve_farm,
)
from .gaussian import added_turbulence, jimenez_deflection, superpose, wake_deficit
from .layout import (
    REGISTERED_LAYOUTS,
    FarmLayout,
    layout_names,
    load_layout,
    parse_layout,
    read_layout,
    row_layout,
    write_layout,
)
from .turbine import AIR_DENSITY, TurbineSpec, turbine_power

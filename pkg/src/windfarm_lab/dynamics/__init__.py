"""Reduced-order dynamic wake simulator."""

from .actuators import ActuatorState, pitch_torque_effect
from .history import WakeHistoryBuffer
from .loads import load_surrogate, moment_penalty, sector_speeds
from .meander import MeanderState
from .series import WindSeries, default_series, read_series, synthetic_series, write_series
from .simulator import (
    DT_S,
    MEASURE_FIELDS,
    N_MEASURES,
    DynamicFarm,
    advection_lag,
    constant_inflow,
)

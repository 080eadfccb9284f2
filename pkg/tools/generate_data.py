"""Regenerate the shipped layout files and the default wind series.

    python tools/generate_data.py

Layouts are written with their load downscale constants calibrated by
``calibrate_load_scale``. The four commercial-farm layouts are regular
approximations with the right turbine count, not surveyed coordinates.
"""

from dataclasses import replace
from pathlib import Path

import numpy as np

from windfarm_lab.dynamics.series import synthetic_series, write_series
from windfarm_lab.env.calibration import calibrate_load_scale
from windfarm_lab.wake.layout import MAX_ROW_TURBINES, REGISTERED_LAYOUTS, FarmLayout, row_layout, write_layout

DATA = Path(__file__).resolve().parents[1] / "src" / "windfarm_lab" / "data"
D = 126.0

ROW5_X = [
    891.5, 891.5, 891.5, 2088.6, 2089.1, 2088.2, 3285.7, 3285.3,
    3285.3, 3285.3, 3285.7, 4482.4, 4482.4, 4482.4, 4482.8, 4481.9,
    5679.5, 5679.9, 5679.1, 5679.0, 5679.5, 6876.2, 6876.2, 6876.1,
    6876.6, 6876.6, 8073.2, 8073.2, 8073.7, 8072.8, 8073.3, 9270.8,
]
ROW5_Y = [
    5169.3, 3743.2, 2317.2, 5168.7, 3743.5, 2318.0, 6594.1, 5169.4,
    3743.4, 2317.3, 892.2, 6594.9, 5168.8, 3742.8, 2317.6, 892.1,
    6594.2, 5169.1, 3743.5, 2317.5, 892.3, 6595.0, 5169.0, 3742.9,
    2317.7, 891.7, 6594.4, 5168.3, 3743.2, 2317.6, 892.4, 6594.6,
]


def grid(n_x, n_y, dx, dy, stagger=0.0):
    pts = [(i * dx + (j % 2) * stagger, j * dy) for j in range(n_y) for i in range(n_x)]
    return np.array(pts, dtype=float)


def arcs(n_arcs, per_arc, radius, arc_spacing, spread_deg):
    """Turbines on concentric circular arcs (a fan-shaped farm)."""
    pts = []
    for a in range(n_arcs):
        r = radius + a * arc_spacing
        for theta in np.radians(np.linspace(-spread_deg / 2, spread_deg / 2, per_arc)):
            pts.append((r * np.cos(theta), r * np.sin(theta)))
    return np.array(pts)


def raw_layouts():
    out = {f"Turb{n}_Row1": row_layout(n).positions for n in range(1, MAX_ROW_TURBINES + 1)}
    out["Ablaincourt"] = np.column_stack([
        [484.8, 797.1, 1038.8, 1377.6, 1716.9, 2057.3, 2400.0],
        [274.0, 251.0, 66.9, -22.7, -112.5, -195.3, -259.0],
    ])
    out["Turb16_TCRWP"] = np.array([((i // 4) * 4 * D + (i % 2 == 0) * 2 * D, -300 + (i % 4) * 4 * D)
                                    for i in range(16)], dtype=float)
    out["Turb6_Row2"] = np.column_stack([[0, 504, 1008] * 2, [-252] * 3 + [252] * 3]).astype(float)
    out["Turb16_Row5"] = np.column_stack([ROW5_X[:16], ROW5_Y[:16]])
    out["Turb32_Row5"] = np.column_stack([ROW5_X, ROW5_Y])
    out["Ormonde"] = grid(6, 5, 4.5 * D, 6.0 * D, stagger=2.25 * D)
    out["WMR"] = grid(7, 5, 6.0 * D, 7.0 * D)
    out["HornsRev1"] = grid(8, 10, 560.0, 560.0)
    out["HornsRev2"] = arcs(7, 13, 3000.0, 7.0 * D, 60.0)
    return out


def main():
    (DATA / "layouts").mkdir(parents=True, exist_ok=True)
    for name, pos in raw_layouts().items():
        assert len(pos) == REGISTERED_LAYOUTS[name], name
        layout = FarmLayout(name, pos)
        layout = replace(layout, c_load_static=calibrate_load_scale(layout, "static"),
                         c_load_dynamic=calibrate_load_scale(layout, "dynamic"))
        write_layout(layout, DATA / "layouts" / f"{name}.txt")
        print(f"{name}: M={layout.n_turbines} c_static={layout.c_load_static:.4g} "
              f"c_dynamic={layout.c_load_dynamic:.4g}")
    # three months at 10-minute cadence
    write_series(synthetic_series(92 * 144, seed=2024), DATA / "wind_series_default.csv")


if __name__ == "__main__":
    main()

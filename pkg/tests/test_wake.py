import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from windfarm_lab.errors import ContractViolation, DomainError
from windfarm_lab.wake import (
    FarmLayout,
    FreeStreamConditions,
    TurbineSpec,
    WakeSource,
    added_turbulence,
    layout_names,
    load_layout,
    load_proxy_static,
    parse_layout,
    row_layout,
    solve_farm,
    superpose,
    turbine_power,
    wake_deficit,
)
from windfarm_lab.wake.gaussian import deficit_field, jimenez_deflection

D = 126.0
SPEC = TurbineSpec()
TABLE_COUNTS = {"Ablaincourt": 7, "Turb16_TCRWP": 16, "Turb6_Row2": 6, "Turb16_Row5": 16, "Turb32_Row5": 32,
                "Ormonde": 30, "WMR": 35, "HornsRev1": 80, "HornsRev2": 91,
                **{f"Turb{x}_Row1": x for x in range(1, 13)}}


def source(yaw=0.0, ct=0.8, ti=0.06, speed=8.0):
    return WakeSource(0.0, 0.0, yaw, ct, ti, speed)


# free-stream conditions and turbine spec ---------------------------------
def test_conditions_normalize_direction():
    assert FreeStreamConditions(8, -90).phi_inf == 270.0
    assert FreeStreamConditions(8, 720.5).phi_inf == pytest.approx(0.5)


@pytest.mark.parametrize("kwargs", [dict(u_inf=-1), dict(u_inf=8, ti_inf=1.0), dict(u_inf=float("nan"))])
def test_conditions_reject_invalid(kwargs):
    with pytest.raises(DomainError):
        FreeStreamConditions(**kwargs)


@pytest.mark.parametrize("kwargs", [dict(rotor_diameter_m=0), dict(cp=0.6), dict(ct=1.0), dict(rated_power_w=0)])
def test_turbine_spec_invariants(kwargs):
    with pytest.raises(ValueError):
        TurbineSpec(**kwargs)


# single-wake kernels -----------------------------------------------------
def test_deficit_zero_upstream():
    assert wake_deficit(source(), (-1.0, 0.0, 90.0), FreeStreamConditions(8.0, 270.0)) == 0.0


def test_deficit_lateral_symmetry_at_zero_yaw():
    c = FreeStreamConditions(8.0, 270.0)
    left = wake_deficit(source(), (4 * D, 40.0, 90.0), c)
    right = wake_deficit(source(), (4 * D, -40.0, 90.0), c)
    assert left == pytest.approx(right, rel=1e-14)


def test_centreline_deficit_classic_width_golden():
    # 1 - sqrt(1 - 0.8 D^2 / (8 (k x + D/sqrt 8)^2)), k = 0.0268, x = 4D
    golden = 0.2727074635032881
    d, _, _ = deficit_field(4 * D, 0.0, 0.0, 0.0, 0.8, D, 0.06, width_ratio=1 / math.sqrt(8))
    assert float(d) == pytest.approx(golden, rel=1e-12)


def test_centreline_deficit_default_width_golden():
    # initial width 0.2 sqrt(beta) D, beta = (1 + sqrt(1 - Ct)) / (2 sqrt(1 - Ct))
    golden = 0.5150000614405388
    assert wake_deficit(source(), (4 * D, 0.0, 90.0), FreeStreamConditions(8.0, 270.0)) == pytest.approx(
        golden, rel=1e-12)


def test_deficit_non_finite_input():
    with pytest.raises(DomainError):
        wake_deficit(source(), (np.nan, 0.0, 90.0), FreeStreamConditions(8.0, 270.0))


def test_deflection_small_angle_limit():
    ct, k = 0.8, 0.0268
    for yaw_deg, rel in ((2.0, 1e-3), (20.0, 1e-2)):
        yaw = math.radians(yaw_deg)
        xi0 = 0.5 * ct * math.sin(yaw) * math.cos(yaw) ** 2
        for x in (0.01, 0.1, 1.0):
            assert jimenez_deflection(x, yaw, ct, k, D) == pytest.approx(xi0 * x, rel=rel)


def test_deflection_initial_slope_includes_cubic_tan_term():
    yaw, ct, k, x = math.radians(25.0), 0.8, 0.0268, 1e-4
    xi0 = 0.5 * ct * math.sin(yaw) * math.cos(yaw) ** 2
    assert jimenez_deflection(x, yaw, ct, k, D) / x == pytest.approx(xi0 + xi0**3 / 3, rel=1e-6)


def test_deflection_sign_follows_yaw():
    k = 0.0268
    assert jimenez_deflection(5 * D, math.radians(25), 0.8, k, D) > 0
    assert jimenez_deflection(5 * D, math.radians(-25), 0.8, k, D) < 0


@given(x1=st.floats(2.0, 30.0), dx=st.floats(0.01, 30.0), ti=st.floats(0.01, 0.3))
def test_centreline_deficit_decreases_downstream(x1, dx, ti):
    d1, _, _ = deficit_field(x1 * D, 0.0, 0.0, 0.0, 0.8, D, ti)
    d2, _, _ = deficit_field((x1 + dx) * D, 0.0, 0.0, 0.0, 0.8, D, ti)
    assert d2 <= d1 + 1e-15


def test_added_turbulence_power_law():
    a1 = added_turbulence(0.8, 3 * D, D, 0.06)
    a2 = added_turbulence(0.8, 6 * D, D, 0.06)
    assert a2 / a1 == pytest.approx(2 ** -0.32, rel=1e-12)


def test_added_turbulence_far_field_and_edges():
    assert added_turbulence(0.8, 100 * D, D, 0.06) < 0.06
    assert added_turbulence(0.0, 5 * D, D, 0.06) == 0.0
    assert added_turbulence(0.8, 0.0, D, 0.06) == 0.0
    assert added_turbulence(0.8, -10.0, D, 0.06) == 0.0


def test_superpose_examples():
    assert superpose([]) == 0.0
    assert superpose([0.3]) == pytest.approx(0.3)
    assert superpose([0.6, 0.8]) == 1.0


@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=8))
def test_superpose_bounds(ds):
    r = superpose(ds)
    assert 0.0 <= r <= 1.0
    assert r >= max(ds) - 1e-15


def test_turbine_power_golden():
    golden = 0.5 * 1.225 * math.pi * 63.0**2 * 0.45 * 8.0**3
    assert float(turbine_power(8.0, 0.0, SPEC)) == pytest.approx(golden, rel=1e-12)
    assert golden == pytest.approx(1.76e6, rel=0.01)


def test_turbine_power_edges():
    assert turbine_power(0.0, 0.0, SPEC) == 0.0
    assert turbine_power(8.0, 90.0, SPEC) == pytest.approx(0.0, abs=1e-6)
    assert turbine_power(30.0, 0.0, SPEC) == SPEC.rated_power_w
    with pytest.raises(ValueError):
        turbine_power(-1.0, 0.0, SPEC)


@given(u1=st.floats(0.0, 11.0), du=st.floats(0.01, 0.5))
def test_turbine_power_increasing_below_rated(u1, du):
    assert turbine_power(u1 + du, 0.0, SPEC) > turbine_power(u1, 0.0, SPEC)


# farm solver -------------------------------------------------------------
def test_single_turbine_sees_free_stream():
    state = solve_farm(row_layout(1), [0.0], FreeStreamConditions(8.0, 270.0))
    assert state.rotor_speed[0] == pytest.approx(8.0, rel=1e-15)


def test_perpendicular_wind_equal_powers():
    state = solve_farm(row_layout(3), [0, 0, 0], FreeStreamConditions(8.0, 0.0))
    p = state.power_w
    assert np.allclose(p, p[0], rtol=1e-9, atol=0)


def test_aligned_row_power_ordering():
    p = solve_farm(row_layout(3), [0, 0, 0], FreeStreamConditions(8.0, 270.0)).power_w
    assert p[0] > max(p[1], p[2])
    # wake-added turbulence widens the second wake, so the third rotor partly recovers
    assert p[2] > p[1]


def test_yaw_length_and_range_contract():
    with pytest.raises(ContractViolation):
        solve_farm(row_layout(3), [0, 0], FreeStreamConditions(8.0))
    with pytest.raises(ContractViolation):
        solve_farm(row_layout(2), [50, 0], FreeStreamConditions(8.0))


def test_rotor_grid_has_nine_points_inside_disk():
    state = solve_farm(row_layout(2), [20.0, 0.0], FreeStreamConditions(8.0, 270.0))
    g = state.grid
    assert g.points.shape == (2, 9, 3)
    centres = np.column_stack([row_layout(2).positions, np.full(2, SPEC.hub_height_m)])
    r = np.linalg.norm(g.points - centres[:, None, :], axis=-1)
    assert np.all(r <= SPEC.radius)


def random_layout(rng, m):
    pts = []
    while len(pts) < m:
        p = rng.uniform(0, 3000, 2)
        if all(np.hypot(*(p - q)) >= 2 * D for q in pts):
            pts.append(p)
    return FarmLayout("random", np.array(pts))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), m=st.integers(1, 7), u=st.floats(0.0, 25.0),
       phi=st.floats(0.0, 360.0, exclude_max=True))
def test_energy_sanity(seed, m, u, phi):
    rng = np.random.default_rng(seed)
    layout = random_layout(rng, m)
    state = solve_farm(layout, rng.uniform(-30, 30, m), FreeStreamConditions(u, phi))
    assert np.all(state.rotor_speed >= 0) and np.all(state.rotor_speed <= u + 1e-12)
    assert np.all(state.power_w >= 0) and np.all(state.power_w <= SPEC.rated_power_w)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), m=st.integers(2, 6))
def test_mirror_symmetry(seed, m):
    rng = np.random.default_rng(seed)
    layout = random_layout(rng, m)
    yaws = rng.uniform(-30, 30, m)
    c = FreeStreamConditions(8.0, 270.0)  # wind along +x, mirror y
    mirrored = FarmLayout("m", layout.positions * [1.0, -1.0])
    p1 = solve_farm(layout, yaws, c).power_w
    p2 = solve_farm(mirrored, -yaws, c).power_w
    assert np.allclose(p1, p2, rtol=1e-9, atol=1e-6)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), m=st.integers(2, 6), angle=st.floats(-180, 180))
def test_rotation_invariance(seed, m, angle):
    rng = np.random.default_rng(seed)
    layout = random_layout(rng, m)
    yaws = rng.uniform(-30, 30, m)
    phi = rng.uniform(0, 360)
    a = math.radians(angle)
    # rotating positions clockwise by `angle` matches adding `angle` to the meteorological direction
    rot = np.array([[math.cos(a), math.sin(a)], [-math.sin(a), math.cos(a)]])
    turned = FarmLayout("r", layout.positions @ rot.T)
    p1 = solve_farm(layout, yaws, FreeStreamConditions(8.0, phi)).power_w
    p2 = solve_farm(turned, yaws, FreeStreamConditions(8.0, phi + angle)).power_w
    assert np.allclose(p1, p2, rtol=1e-9, atol=1e-6)


def test_independent_turbines_sum_to_single_power():
    layout = FarmLayout("spread", np.array([[0.0, 0.0], [0.0, 1000.0], [0.0, 2000.0]]))
    state = solve_farm(layout, [0, 0, 0], FreeStreamConditions(8.0, 270.0))
    single = solve_farm(row_layout(1), [0.0], FreeStreamConditions(8.0, 270.0)).total_power_w
    assert state.total_power_w == pytest.approx(3 * single, rel=1e-9)


# load proxy --------------------------------------------------------------
def test_load_proxy_single_turbine():
    assert load_proxy_static(solve_farm(row_layout(1), [0.0], FreeStreamConditions(8.0, 270.0, 0.0))) == 0.0
    state = solve_farm(row_layout(1), [0.0], FreeStreamConditions(8.0, 270.0, 0.06))
    assert load_proxy_static(state) == pytest.approx(0.54, rel=1e-12)


def test_load_proxy_lower_when_wakes_deflected_off():
    layout = FarmLayout("wide", np.array([[0.0, 0.0], [5 * D, 0.0]]))
    c = FreeStreamConditions(8.0, 270.0)
    greedy = load_proxy_static(solve_farm(layout, [0, 0], c))
    # brute force over the upstream yaw: the largest deflection is the least loaded
    loads = {y: load_proxy_static(solve_farm(layout, [y, 0], c)) for y in range(-45, 46, 5)}
    assert min(loads.values()) < greedy


# layouts -----------------------------------------------------------------
def test_registered_layout_counts():
    for name, m in TABLE_COUNTS.items():
        assert load_layout(name).n_turbines == m
    assert set(TABLE_COUNTS) == set(layout_names())


def test_registered_layouts_respect_spacing():
    for name in layout_names():
        pos = load_layout(name).positions
        if len(pos) > 1:
            dist = np.hypot(*(pos[:, None] - pos[None]).transpose(2, 0, 1))
            assert dist[~np.eye(len(pos), dtype=bool)].min() >= D


def test_layout_text_roundtrip():
    layout = load_layout("Ablaincourt")
    from windfarm_lab.wake import layout as layout_mod

    again = parse_layout(layout_mod.format_layout(layout))
    assert np.array_equal(again.positions, layout.positions)
    assert again.name == layout.name

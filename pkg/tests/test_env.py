import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from windfarm_lab.dynamics.series import WindSeries, write_series
from windfarm_lab.env import (
    AgentCycleEnv,
    EnvConfig,
    FarmEnv,
    RewardShaper,
    actuation_budget_check,
    combined_reward,
    env_ids,
    make_env,
    parse_config,
    reward_production,
)
from windfarm_lab.env.calibration import calibrate_load_scale
from windfarm_lab.errors import ContractViolation
from windfarm_lab.wake import load_layout


# registry ----------------------------------------------------------------
def test_make_env_examples():
    dec = make_env("Dec_Turb3_Row1_Static")
    assert dec.n_agents == 3 and dec.agents == ["turbine_0", "turbine_1", "turbine_2"]
    central = make_env("Ablaincourt_Static")
    assert central.action_space.shape == (7,)
    with pytest.raises(KeyError, match="Dec_Turb3_Row1_Static"):
        make_env("Dec_Turb3_Row1_Bogus")


def test_simulator_aliases():
    assert make_env("Dec_Turb2_Row1_Floris").core.config.simulator == "static"
    assert make_env("Turb2_Row1_Fastfarm").core.config.simulator == "dynamic"
    assert "Dec_HornsRev2_Dynamic" in env_ids()


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "env.cfg"
    path.write_text("# test\nscenario = II\nalpha=0.5\nbridge.endpoint = loopback\nepisode_length=7\n")
    parsed = parse_config(path.read_text())
    assert parsed == dict(scenario="II", alpha=0.5, bridge_endpoint="loopback", episode_length=7)
    env = make_env("Dec_Turb2_Row1_Static", config_file=path, alpha=0.25)
    assert env.core.config.scenario == "II" and env.core.config.alpha == 0.25
    with pytest.raises(KeyError):
        parse_config("no_such_key=1")


@pytest.mark.parametrize("kwargs", [dict(episode_length=0), dict(discount=1.0), dict(alpha=-1),
                                    dict(duty_cap=0), dict(controls=("pitch",))])
def test_config_invariants(kwargs):
    with pytest.raises(ValueError):
        EnvConfig(**kwargs)


# reset and wind scenarios -------------------------------------------------
def test_reset_determinism_and_greedy_start():
    env = FarmEnv(EnvConfig())
    a, b = env.reset(seed=3), env.reset(seed=3)
    assert np.array_equal(a, b)
    assert np.all(env.yaw == 0)


def test_scenario_two_direction_mean():
    env = FarmEnv(EnvConfig(scenario="II"))
    env.rng = np.random.default_rng(0)
    phis = np.array([env._sample_conditions().phi_inf for _ in range(10000)])
    phis = (phis + 180.0) % 360.0 - 180.0 + 360.0  # unwrap around the 270 deg prevailing direction
    assert abs(phis.mean() - 270.0) <= 3 * 5.0 / 100


def test_scenario_two_speed_ks():
    env = FarmEnv(EnvConfig(scenario="II"))
    env.rng = np.random.default_rng(1)
    u = np.array([env._sample_conditions().u_inf for _ in range(10000)])
    assert stats.kstest(u, stats.weibull_min(2.0, scale=8.0).cdf).pvalue > 0.01


def test_scenario_three_start_bounds(tmp_path):
    path = tmp_path / "s.csv"
    write_series(WindSeries(np.arange(10) * 600.0, np.linspace(6, 10, 10), np.full(10, 270.0)), path)
    env = FarmEnv(EnvConfig(scenario="III", series_path=str(path), episode_length=5))
    starts = set()
    for seed in range(200):
        env.reset(seed)
        starts.add(env._start_row)
    assert starts == set(range(6))


def test_scenario_three_follows_series(tmp_path):
    path = tmp_path / "s.csv"
    write_series(WindSeries(np.arange(10) * 600.0, np.arange(10) + 5.0, np.full(10, 270.0)), path)
    env = FarmEnv(EnvConfig(scenario="III", series_path=str(path), episode_length=3))
    env.reset(0)
    start = env._start_row
    for k in range(1, 4):
        _, _, _, info = env.step(np.zeros((3, 1)))
        assert info["u_inf"] == 5.0 + start + k


# stepping ----------------------------------------------------------------
def test_zero_actions_are_a_fixed_point():
    env = FarmEnv(EnvConfig())
    obs0 = env.reset(0)
    _, r0, _, info0 = env.step(np.zeros((3, 1)))
    obs1, r1, _, _ = env.step(np.zeros((3, 1)))
    assert np.array_equal(obs0, obs1) and np.array_equal(r0, r1)
    greedy = combined_reward(info0["r_power"], info0["load_raw"], 1.0, env.c_load)
    assert r0[0] == greedy


def test_action_clamped_before_gating():
    env = FarmEnv(EnvConfig())
    env.reset(0)
    env.step([[7.0], [0.0], [-9.0]])
    assert np.array_equal(env.yaw, [5.0, 0.0, -5.0])


def test_steering_toward_oracle_raises_power_reward():
    env = FarmEnv(EnvConfig(duty_cap=1.0))
    env.reset(0)
    _, _, _, greedy = env.step(np.zeros((3, 1)))
    for _ in range(5):
        _, _, _, info = env.step([[5.0], [5.0], [0.0]])
    assert np.array_equal(env.yaw, [25.0, 25.0, 0.0])
    assert info["r_power"] > greedy["r_power"]


def test_step_after_termination():
    env = FarmEnv(EnvConfig(episode_length=2))
    env.reset(0)
    env.step(np.zeros((3, 1)))
    _, _, done, _ = env.step(np.zeros((3, 1)))
    assert done
    with pytest.raises(ContractViolation):
        env.step(np.zeros((3, 1)))


def test_action_shape_contract():
    env = FarmEnv(EnvConfig())
    env.reset(0)
    with pytest.raises(ContractViolation):
        env.step(np.zeros((2, 1)))


def test_info_keys():
    env = FarmEnv(EnvConfig())
    env.reset(0)
    _, _, _, info = env.step(np.zeros((3, 1)))
    for key in ("power_total_w", "load_raw", "budget_frac_agent_0", "budget_frac_agent_2"):
        assert key in info


# duty cycle --------------------------------------------------------------
def test_budget_examples():
    assert actuation_budget_check(0.0, 0.0, 5 / 0.3, 60.0)  # first actuation
    assert not actuation_budget_check(9.0, 100.0 - 5.0, 5.0, 5.0)  # (9 + 5) / 105 > 10 %
    assert actuation_budget_check(9.0, 95.0, 0.0, 5.0)
    assert actuation_budget_check(5.0, 100.0, 5.0, 5.0)  # 10 / 105 < 10 %


def test_rejected_request_is_zeroed_and_flagged():
    env = FarmEnv(EnvConfig())
    env.reset(0)
    env.step([[5.0], [0.0], [0.0]])  # 16.7 s of 60 s
    _, _, _, info = env.step([[5.0], [0.0], [0.0]])  # 33.3 s of 120 s -> rejected
    assert info["rejected"][0] and not info["rejected"][1]
    assert env.yaw[0] == 5.0


@pytest.mark.parametrize("env_id", ["Dec_Turb3_Row1_Static", "Dec_Turb2_Row1_Dynamic"])
def test_random_policy_duty_cycle(env_id):
    env = make_env(env_id, episode_length=60).core
    rng = np.random.default_rng(0)
    slack = max(a / r for a, r in zip((5.0, 1.0, 0.05), (0.3, 8.0, 0.1)))
    for ep in range(5):
        env.reset(ep)
        done = False
        while not done:
            box = env.action_space
            _, _, done, _ = env.step(rng.uniform(box.low, box.high, (env.n_agents, env.act_dim)))
        elapsed = env.budget.elapsed_s
        assert np.all(env.budget.used_s <= 0.10 * elapsed + slack)


# rewards -----------------------------------------------------------------
def test_reward_production_examples():
    assert reward_production([0.0, 0.0], 8.0) == 0.0
    assert reward_production([1000.0, 600.0], 10.0) == pytest.approx(0.8)
    assert reward_production([1000.0], 0.5) == 0.0


@given(p=st.lists(st.floats(0, 5000), min_size=1, max_size=6), u=st.floats(1.5, 20))
def test_cubic_rescaling_invariance(p, u):
    a = reward_production(p, u)
    b = reward_production(np.array(p) * 8.0, 2.0 * u)
    assert b == pytest.approx(a, rel=1e-12, abs=1e-300)


def test_combined_reward_linearity():
    assert combined_reward(0.7, 3.0, alpha=0.0, c_load=2.0) == 0.7
    assert combined_reward(0.7, 3.0, 2.0, 0.1) - combined_reward(0.7, 3.0, 1.0, 0.1) == pytest.approx(-0.3)


@pytest.mark.parametrize("simulator", ["static", "dynamic"])
def test_calibration_puts_terms_on_same_scale(simulator):
    layout = load_layout("Turb3_Row1")
    stored = layout.c_load_static if simulator == "static" else layout.c_load_dynamic
    env = FarmEnv(EnvConfig(simulator=simulator, episode_length=30))
    env.reset(0)
    ratios = []
    done = False
    while not done:
        _, _, done, info = env.step(np.zeros((3, env.act_dim)))
        ratios.append(info["r_power"] / (env.c_load * info["load_raw"]))
    assert env.c_load == stored
    assert 0.5 <= np.mean(ratios) <= 2.0
    if simulator == "static":
        assert calibrate_load_scale(layout, "static") == pytest.approx(stored, rel=1e-12)


def test_default_shaper_common_reward_and_custom_shaper():
    env = FarmEnv(EnvConfig(duty_cap=1.0))
    env.reset(0)
    _, r, _, _ = env.step([[5.0], [-3.0], [1.0]])
    assert np.all(r == r[0])

    class PerTurbine(RewardShaper):
        def __call__(self, farm, agents):
            return np.array([a["power_w"] / 1e6 for a in agents])

    env = FarmEnv(EnvConfig(), reward_shaper=PerTurbine())
    env.reset(0)
    _, r, _, info = env.step(np.zeros((3, 1)))
    assert np.allclose(r, info["power_w"] / 1e6)


# observations ------------------------------------------------------------
def test_static_observation_tracks_target():
    env = FarmEnv(EnvConfig(duty_cap=1.0))
    env.reset(0)
    obs, _, _, _ = env.step([[4.0], [-2.0], [0.0]])
    assert np.array_equal(obs[:, 2], [4.0, -2.0, 0.0])
    assert np.array_equal(obs[:, 3], obs[:, 2])
    g = env.global_observation(obs)
    assert len(g) == 3 * 4 + 2 and g[-2:].tolist() == [8.0, 270.0]


def test_dynamic_yaw_lags_then_converges():
    env = FarmEnv(EnvConfig(simulator="dynamic", duty_cap=1.0, episode_length=40))
    env.reset(0)
    obs, _, _, _ = env.step([[5.0, 0.0, 0.0]] * 3)
    assert np.allclose(obs[:, 2], 0.9) and np.allclose(obs[:, 5], 5.0)
    for _ in range(5):
        obs, _, _, _ = env.step(np.zeros((3, 3)))
    assert np.allclose(obs[:, 2], 5.0)
    assert env.global_observation(obs).shape == (3 * 8 + 2,)


# interfaces --------------------------------------------------------------
@settings(max_examples=5, deadline=None)
@given(seed=st.integers(0, 1000))
def test_centralized_matches_decentralized(seed):
    central = make_env("Turb3_Row1_Static", episode_length=20)
    dec = make_env("Dec_Turb3_Row1_Static", episode_length=20)
    rng = np.random.default_rng(seed)
    c_obs = central.reset(seed)
    d_obs = dec.reset(seed)
    assert np.array_equal(c_obs, dec.state())
    for _ in range(20):
        a = rng.uniform(-5, 5, 3)
        c_obs, c_r, c_done, _ = central.step(a)
        d_obs, d_r, d_done, _ = dec.step({f"turbine_{i}": a[i:i + 1] for i in range(3)})
        assert np.array_equal(c_obs, dec.state())
        assert all(c_r == d_r[k] for k in d_r) and c_done == d_done["turbine_0"]


def test_agent_cycle_matches_parallel():
    par = make_env("Dec_Turb3_Row1_Static", episode_length=4)
    cyc = AgentCycleEnv(make_env("Dec_Turb3_Row1_Static", episode_length=4))
    par.reset(1)
    cyc.reset(1)
    actions = {"turbine_0": [3.0], "turbine_1": [-2.0], "turbine_2": [1.0]}
    steps = 0
    for agent in cyc.agent_iter():
        _, _, done, _ = cyc.last()
        cyc.step(None if done else actions[agent])
        if agent == "turbine_2" and not done:
            obs, rewards, _, _ = par.step(actions)
            steps += 1
            assert np.array_equal(cyc._obs[agent], obs[agent])
            assert cyc._rewards[agent] == rewards[agent]
    assert steps == 4

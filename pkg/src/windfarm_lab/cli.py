"""Command-line experiment runner.

    windfarm-lab train --env Dec_Turb3_Row1_Static --algo ippo --steps 200000 --seeds 0,1,2
    windfarm-lab score --env Dec_Turb3_Row1_Static --out runs
    windfarm-lab oracle --env Turb3_Row1_Static
    windfarm-lab transfer --env Dec_Turb3_Row1_Dynamic --checkpoint runs/<run>/policy
    windfarm-lab serve-bridge --env Turb3_Row1_Dynamic --endpoint tcp://127.0.0.1:5555
"""

import argparse
import csv
import os
import shutil
import sys
from dataclasses import dataclass, field
from functools import partial
from importlib import metadata
from pathlib import Path

import numpy as np

from .bench.oracle import EXHAUSTIVE_HARD_LIMIT, grid_search_oracle
from .bench.scoring import evaluate_score, results_table, write_score_csv
from .bench.transfer import transfer_finetune
from .bench.weights import extract_weights
from .dynamics.series import default_series, read_series
from .env.config import read_config
from .env.registry import make_env, parse_env_id
from .marl.checkpoint import load_policy, read_manifest, save_policy
from .marl.trainers import run_episode, train_ippo, train_mappo
from .wake.conditions import FreeStreamConditions

TRAINERS = {"ippo": train_ippo, "mappo": train_mappo}


def code_version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


@dataclass
class ExperimentConfig:
    command: str
    env_id: str
    scenario: str = "I"
    algorithm: str = "ippo"
    total_steps: int = 200_000
    seeds: list = field(default_factory=lambda: [0])
    output_dir: Path = Path("runs")
    overrides: dict = field(default_factory=dict)
    force: bool = False

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if self.algorithm not in TRAINERS:
            raise ValueError(f"algorithm must be one of {sorted(TRAINERS)}")
        self.output_dir = Path(self.output_dir)

    def env_factory(self, **extra):
        return make_env(self.env_id, scenario=self.scenario, **{**self.overrides, **extra})


def run_name(algo, env_id, scenario, seed):
    return f"{algo}_{env_id}_sc{scenario}_seed{seed}"


def _write_csv(path, header, rows):
    tmp = Path(str(path) + ".tmp")
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    os.replace(tmp, path)


# commands ----------------------------------------------------------------
def cmd_train(cfg):
    """One training run per seed: metrics.csv plus a policy checkpoint each."""
    _, simulator, decentralized = parse_env_id(cfg.env_id)
    if not decentralized:
        raise SystemExit("training needs a per-agent env id (Dec_ prefix)")
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    runs = []
    for seed in cfg.seeds:
        final = cfg.output_dir / run_name(cfg.algorithm, cfg.env_id, cfg.scenario, seed)
        if final.exists() and not cfg.force:
            raise SystemExit(f"{final} already exists; pass --force to overwrite")
        partial_dir = final.with_name(final.name + ".partial")
        shutil.rmtree(partial_dir, ignore_errors=True)
        partial_dir.mkdir()
        result = TRAINERS[cfg.algorithm](cfg.env_factory, total_steps=cfg.total_steps, seed=seed,
                                         metrics_path=partial_dir / "metrics.csv")
        save_policy(result.policy, partial_dir / "policy",
                    dict(env_id=cfg.env_id, scenario=cfg.scenario, seed=seed,
                         steps=cfg.total_steps, code_version=code_version()))
        shutil.rmtree(final, ignore_errors=True)
        os.replace(partial_dir, final)
        runs.append(final)
        print(f"trained {final}")
    return runs


def cmd_evaluate(cfg, checkpoint, episode_length=150):
    """Per-step trace of one deterministic episode (plot-ready CSV)."""
    policy = load_policy(checkpoint)
    env = cfg.env_factory(episode_length=episode_length)
    core = env.core
    obs = core.reset(cfg.seeds[0])
    rows, done, k = [], False, 0
    while not done:
        obs, rewards, done, info = core.step(policy.act(obs))
        k += 1
        rows.append([k, float(rewards[0]), info["power_total_w"], info["load_raw"], *core.yaw])
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.output_dir / f"evaluate_{Path(checkpoint).parent.name or Path(checkpoint).name}.csv"
    header = ["step", "reward", "power_total_w", "load_raw"] + [f"yaw_{i}" for i in range(core.n_agents)]
    _write_csv(path, header, rows)
    print(f"wrote {path}")
    return path


def find_runs(out_dir, env_id):
    runs = []
    for d in sorted(Path(out_dir).glob(f"*_{env_id}_sc*_seed*")):
        if d.name.endswith(".partial"):
            continue
        runs.append(d)
    return runs


def cmd_score(cfg, series_path=None, run_dirs=None):
    """Results report across algorithms, training scenarios and seeds.

    Column ``I`` is the return under the scenario-I wind; column
    ``weighted`` is the wind-rose weighted score over the extracted
    conditions.
    """
    series = read_series(series_path) if series_path else default_series()
    weights = extract_weights(series)
    run_dirs = list(run_dirs) if run_dirs is not None else find_runs(cfg.output_dir, cfg.env_id)
    reward_cells, power_cells, load_cells, missing = {}, {}, {}, []
    rows_seen = []
    for d in run_dirs:
        stem = Path(d) / "policy"
        if not stem.with_suffix(".manifest").exists():
            missing.append(str(d))
            continue
        meta, _ = read_manifest(stem.with_suffix(".manifest"))
        policy = load_policy(stem)
        row = f"{meta['algo']} (train Sc. {meta.get('scenario', '?')})"
        if row not in rows_seen:
            rows_seen.append(row)
        factory = partial(make_env, cfg.env_id, **cfg.overrides)
        single = factory(scenario="I", episode_length=150)
        ev = run_episode(policy, single, seed=0)
        report = evaluate_score(policy, factory, weights)
        write_score_csv(report, Path(d) / "score_conditions.csv")
        for cells, key_i, key_w in ((reward_cells, ev["score"], report.score),
                                    (power_cells, ev["power_sum"], report.power),
                                    (load_cells, ev["load_raw"], report.load)):
            cells.setdefault((row, "I"), []).append(key_i)
            cells.setdefault((row, "weighted"), []).append(key_w)
    cols = ["I", "weighted"]
    head = ["# evaluation weights (wind_speed, wind_direction, weight):"]
    head += [f"#   {u:.3f}, {p:.3f}, {w:.6f}" for (u, p), w in zip(weights.conditions(), weights.weights)]
    if missing:
        head.append("# missing checkpoints: " + ", ".join(missing))
    blocks, csv_blocks = [], []
    for title, cells in (("episode reward", reward_cells), ("summed power (W x steps)", power_cells),
                         ("summed load penalty", load_cells)):
        text, csv_text = results_table(cells, rows_seen, cols, title)
        blocks.append(text)
        csv_blocks.append(f"# {title}\n{csv_text}")
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    text = "\n".join(head) + "\n\n" + "\n".join(blocks)
    (cfg.output_dir / f"score_{cfg.env_id}.txt").write_text(text)
    (cfg.output_dir / f"score_{cfg.env_id}.csv").write_text("\n".join(head) + "\n" + "".join(csv_blocks))
    print(text)
    return reward_cells, missing


def cmd_oracle(cfg, wind_speeds=(8.0,), wind_directions=(None,), method="auto", step_deg=5.0,
               max_yaw_deg=30.0):
    """Oracle yaws and powers for each (speed, direction) pair."""
    layout_name, simulator, _ = parse_env_id(cfg.env_id)
    if simulator != "static":
        raise SystemExit("the oracle searches the static model; use a *_Static env id")
    env = make_env(cfg.env_id, **cfg.overrides)
    layout = env.core.layout
    if method == "exhaustive" and layout.n_turbines > EXHAUSTIVE_HARD_LIMIT:
        raise SystemExit(f"{layout.n_turbines} turbines is too many for exhaustive search; "
                         "use --method coordinate")
    rows = []
    for u in wind_speeds:
        for phi in wind_directions:
            phi = layout.prevailing_direction if phi is None else phi
            res = grid_search_oracle(layout, FreeStreamConditions(u, phi), step_deg, max_yaw_deg, method)
            rows.append([u, phi, res.method, " ".join(f"{y:g}" for y in res.yaws),
                         res.power_w, res.greedy_power_w, res.gain])
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.output_dir / f"oracle_{cfg.env_id}.csv"
    _write_csv(path, ["wind_speed", "wind_direction", "method", "yaws", "power_w", "greedy_power_w",
                      "gain"], rows)
    for r in rows:
        print(f"u={r[0]:g} phi={r[1]:g} yaws=[{r[3]}] gain={r[6]:.4f}")
    return path


def cmd_transfer(cfg, checkpoint):
    """Zero-shot then fine-tuned evaluation of a static-trained policy on a dynamic env."""
    _, simulator, _ = parse_env_id(cfg.env_id)
    if simulator != "dynamic":
        raise SystemExit("transfer targets a dynamic env id")
    policy = load_policy(checkpoint)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for seed in cfg.seeds:
        res = transfer_finetune(policy, cfg.env_factory, steps=cfg.total_steps, seed=seed)
        for phase, ev in (("zero_shot", res.zero_shot), ("fine_tuned", res.fine_tuned)):
            rows.append([seed, phase, ev["tail_gain"], ev["energy_gain"], ev["load_change"]])
        _write_csv(cfg.output_dir / f"transfer_trajectory_seed{seed}.csv",
                   ["step", "power_total_w", "load_raw"],
                   [[int(k), p, l] for k, p, l in res.trajectory])
        _write_csv(cfg.output_dir / f"transfer_metrics_seed{seed}.csv",
                   list(res.metrics[0]) if res.metrics else ["update"],
                   [list(r.values()) for r in res.metrics])
        save_policy(res.policy, cfg.output_dir / f"transfer_policy_seed{seed}",
                    dict(env_id=cfg.env_id, seed=seed, code_version=code_version()))
    path = cfg.output_dir / "transfer_summary.csv"
    _write_csv(path, ["seed", "phase", "tail_power_gain", "energy_gain", "load_change"], rows)
    for r in rows:
        print(f"seed {r[0]} {r[1]}: power gain {r[2]:+.2%} (episode energy {r[3]:+.2%})")
    return path


def cmd_serve_bridge(cfg, endpoint, sessions=None):
    """Serve dynamic-farm episodes over the framed protocol."""
    from .bridge.session import serve
    from .dynamics.simulator import DynamicFarm, constant_inflow

    env = make_env(cfg.env_id, **cfg.overrides)
    core = env.core
    c = core.config
    direction = c.wind_direction if c.wind_direction is not None else core.layout.prevailing_direction
    inflow = constant_inflow(FreeStreamConditions(c.wind_speed, direction, c.ti_inf))

    def factory(i):
        seed = cfg.seeds[i % len(cfg.seeds)]
        return DynamicFarm(core.layout, inflow, seed=seed, dt=c.dynamic_step_s, yaw_rate=c.yaw_rate,
                           pitch_rate=c.pitch_rate, torque_rate=c.torque_rate), seed

    print(f"serving {core.layout.name} on {endpoint}", flush=True)
    return serve(endpoint, factory, max_sessions=sessions)


# argument parsing --------------------------------------------------------
def _seeds(text):
    return [int(s) for s in text.split(",") if s.strip()]


def _floats(text):
    return [float(s) for s in text.split(",") if s.strip()]


def build_parser():
    parser = argparse.ArgumentParser(prog="windfarm-lab", description="Wind-farm control experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, steps=200_000):
        p.add_argument("--env", required=True, help="environment id, e.g. Dec_Turb3_Row1_Static")
        p.add_argument("--scenario", default=None, choices=["I", "II", "III"],
                       help="default: the config file's scenario, else I")
        p.add_argument("--algo", default="ippo", choices=sorted(TRAINERS))
        p.add_argument("--steps", type=int, default=steps)
        p.add_argument("--seeds", type=_seeds, default=[0], help="comma-separated seeds")
        p.add_argument("--out", type=Path, default=Path("runs"))
        p.add_argument("--config", type=Path, help="key=value environment config file")
        p.add_argument("--force", action="store_true", help="overwrite existing runs")
        return p

    common(sub.add_parser("train", help="train policies, one run per seed"))
    p = common(sub.add_parser("evaluate", help="trace one deterministic episode"))
    p.add_argument("--checkpoint", required=True, help="checkpoint stem (without .bin/.manifest)")
    p.add_argument("--episode-length", type=int, default=150)
    p = common(sub.add_parser("score", help="weighted multi-condition report"))
    p.add_argument("--series", type=Path, help="wind series for the evaluation weights")
    p.add_argument("--runs", nargs="*", type=Path, help="run directories (default: all in --out)")
    p = common(sub.add_parser("oracle", help="grid-search yaw oracle on the static model"))
    p.add_argument("--wind-speeds", type=_floats, default=[8.0])
    p.add_argument("--wind-directions", type=_floats, default=None)
    p.add_argument("--method", default="auto", choices=["auto", "exhaustive", "coordinate"])
    p = common(sub.add_parser("transfer", help="zero-shot + fine-tune on the dynamic model"), steps=28800)
    p.add_argument("--checkpoint", required=True)
    p = common(sub.add_parser("serve-bridge", help="serve dynamic-farm episodes over a socket"))
    p.add_argument("--endpoint", help="tcp://host:port or unix:/path (default: bridge.endpoint)")
    p.add_argument("--sessions", type=int, default=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = dict(read_config(args.config)) if args.config else {}
    scenario = args.scenario or overrides.pop("scenario", "I")
    overrides.pop("scenario", None)
    cfg = ExperimentConfig(args.command, args.env, scenario, args.algo, args.steps, args.seeds,
                           args.out, overrides, args.force)
    try:
        parse_env_id(cfg.env_id)
    except KeyError as exc:
        raise SystemExit(str(exc)) from None
    if args.command == "train":
        cmd_train(cfg)
    elif args.command == "evaluate":
        cmd_evaluate(cfg, args.checkpoint, args.episode_length)
    elif args.command == "score":
        cmd_score(cfg, args.series, args.runs)
    elif args.command == "oracle":
        cmd_oracle(cfg, args.wind_speeds, args.wind_directions or [None], args.method)
    elif args.command == "transfer":
        cmd_transfer(cfg, args.checkpoint)
    elif args.command == "serve-bridge":
        endpoint = args.endpoint or overrides.get("bridge_endpoint")
        if not endpoint or endpoint == "loopback":
            raise SystemExit("serve-bridge needs --endpoint tcp://host:port or unix:/path")
        cfg.overrides.pop("bridge_endpoint", None)
        cmd_serve_bridge(cfg, endpoint, args.sessions)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Weighted multi-condition scores and Table-style reports."""

import csv
import io
from dataclasses import dataclass

import numpy as np

from ..marl.trainers import run_episode

EVAL_EPISODE_LENGTH = 150


@dataclass(frozen=True)
class ScoreReport:
    weights: object  # EvalWeights
    returns: np.ndarray  # per-condition undiscounted episode return
    power_sum: np.ndarray  # per-condition summed farm power (W x steps)
    load_sum: np.ndarray  # per-condition summed raw load penalty

    @property
    def score(self):
        return float(np.dot(self.weights.weights, self.returns))

    @property
    def power(self):
        return float(np.dot(self.weights.weights, self.power_sum))

    @property
    def load(self):
        return float(np.dot(self.weights.weights, self.load_sum))

    def rows(self):
        w = self.weights
        return [dict(condition=j, wind_speed=float(w.wind_speed[j]),
                     wind_direction=float(w.wind_direction[j]), weight=float(w.weights[j]),
                     episode_return=float(self.returns[j]), power_sum=float(self.power_sum[j]),
                     load_sum=float(self.load_sum[j])) for j in range(len(w))]


def evaluate_score(policy, env_factory, weights, episode_length=EVAL_EPISODE_LENGTH, seed=0):
    """Wind-rose weighted score: sum over conditions of weight x undiscounted return.

    ``env_factory(**overrides)`` builds an env (e.g. ``partial(make_env,
    env_id)``); each condition runs one deterministic episode under constant
    wind ``(u_j, phi_j)``.
    """
    returns, power, load = [], [], []
    for u, phi in weights.conditions():
        env = env_factory(scenario="I", wind_speed=u, wind_direction=phi, episode_length=episode_length)
        ev = run_episode(policy, env, seed=seed)
        returns.append(ev["score"])
        power.append(ev["power_sum"])
        load.append(ev["load_raw"])
    return ScoreReport(weights, np.array(returns), np.array(power), np.array(load))


def write_score_csv(report, path):
    rows = report.rows()
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        for r in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})


def read_score_csv(path):
    with open(path, newline="") as fh:
        return [{k: int(v) if k == "condition" else float(v) for k, v in r.items()}
                for r in csv.DictReader(fh)]


def summarize(values):
    """(mean, std) with the population std, so a single seed gives 0."""
    v = np.asarray(values, dtype=float)
    return float(v.mean()), float(v.std())


def results_table(cells, row_keys, col_keys, title=""):
    """Mean +- std table.

    ``cells[(row, col)]`` is a list of per-seed values, or missing/empty for
    a gap (rendered ``--``). Returns ``(text, csv_text)``.
    """
    header = ["", *col_keys]
    text_rows, csv_rows = [], [["row", "column", "mean", "std", "n_seeds"]]
    for r in row_keys:
        line = [str(r)]
        for c in col_keys:
            vals = cells.get((r, c)) or []
            if vals:
                m, s = summarize(vals)
                line.append(f"{m:.4g} ± {s:.2g}")
                csv_rows.append([r, c, repr(m), repr(s), len(vals)])
            else:
                line.append("--")
                csv_rows.append([r, c, "", "", 0])
        text_rows.append(line)
    widths = [max(len(row[i]) for row in [header, *text_rows]) for i in range(len(header))]
    fmt = lambda row: "  ".join(cell.ljust(w) for cell, w in zip(row, widths))  # noqa: E731
    lines = ([title] if title else []) + [fmt(header), fmt(["-" * w for w in widths])]
    lines += [fmt(row) for row in text_rows]
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(csv_rows)
    return "\n".join(lines) + "\n", buf.getvalue()

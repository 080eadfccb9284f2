import csv
import os

METRIC_COLUMNS = ("update", "step", "score", "power_sum", "load_raw", "kl", "clipfrac")


def _fmt(value):
    return str(value) if isinstance(value, int) else repr(float(value))


class MetricsLog:
    """Append-only CSV of evaluation rows (kept in memory as well).

    With a ``path``, the header is written on creation and every row is
    flushed as it arrives, so a crashed run keeps its history.
    """

    def __init__(self, path=None, columns=METRIC_COLUMNS):
        self.path = path
        self.columns = tuple(columns)
        self.rows = []
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(",".join(self.columns) + "\n")

    def append(self, row):
        row = {k: row[k] for k in self.columns}
        self.rows.append(row)
        if self.path is not None:
            with open(self.path, "a", newline="") as fh:
                fh.write(",".join(_fmt(row[k]) for k in self.columns) + "\n")


def read_metrics(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        out.append({k: int(v) if k in ("update", "step") else float(v) for k, v in r.items()})
    return out


def metrics_exist(path):
    return os.path.exists(path)

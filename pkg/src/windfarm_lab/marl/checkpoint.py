"""Policy checkpoints: a flat little-endian float64 file plus a text manifest.

The manifest (``<stem>.manifest``) starts with ``key=value`` metadata lines
and then lists one tensor per line as ``name shape offset`` where ``shape``
is comma-separated and ``offset`` counts float64 values into ``<stem>.bin``.
"""

from pathlib import Path

import numpy as np

from ..env.spaces import Box
from .policy import GaussianActor
from .trainers import FarmPolicy

FORMAT = "windfarm-lab-params"
VERSION = 1


def _actor_tensors(actor):
    named = []
    for k, (w, b) in enumerate(zip(actor.net.weights, actor.net.biases)):
        named += [(f"layer{k}.weight", w), (f"layer{k}.bias", b)]
    named.append(("log_std", actor.log_std))
    return named


def save_policy(policy, stem, extra=None):
    """Write ``<stem>.bin`` and ``<stem>.manifest``; returns the two paths."""
    stem = Path(stem)
    stem.parent.mkdir(parents=True, exist_ok=True)
    a0 = policy.actors[0]
    meta = dict(format=FORMAT, version=VERSION, algo=policy.algo, n_agents=policy.n_agents,
                sizes=",".join(map(str, a0.net.sizes)),
                action_scale=",".join(repr(float(s)) for s in np.atleast_1d(a0.action_scale)),
                obs_low=",".join(repr(float(v)) for v in policy.obs_space.low),
                obs_high=",".join(repr(float(v)) for v in policy.obs_space.high))
    meta.update(extra or {})
    lines = [f"{k}={v}" for k, v in meta.items()]
    chunks, offset = [], 0
    for i, actor in enumerate(policy.actors):
        for name, t in _actor_tensors(actor):
            lines.append(f"agent{i}.{name} {','.join(map(str, t.data.shape))} {offset}")
            chunks.append(t.data.astype("<f8").ravel())
            offset += t.data.size
    bin_path, man_path = stem.with_suffix(".bin"), stem.with_suffix(".manifest")
    np.concatenate(chunks).astype("<f8").tofile(bin_path)
    man_path.write_text("\n".join(lines) + "\n")
    return bin_path, man_path


def read_manifest(path):
    meta, tensors = {}, []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if "=" in line and " " not in line:
            k, v = line.split("=", 1)
            meta[k] = v
        else:
            name, shape, offset = line.split()
            tensors.append((name, tuple(int(s) for s in shape.split(",") if s), int(offset)))
    return meta, tensors


def load_policy(stem):
    stem = Path(stem)
    meta, tensors = read_manifest(stem.with_suffix(".manifest"))
    if meta.get("format") != FORMAT or int(meta.get("version", -1)) != VERSION:
        raise ValueError(f"{stem}: not a version-{VERSION} {FORMAT} checkpoint")
    flat = np.fromfile(stem.with_suffix(".bin"), dtype="<f8")
    sizes = tuple(int(s) for s in meta["sizes"].split(","))
    scale = np.array([float(s) for s in meta["action_scale"].split(",")])
    rng = np.random.default_rng(0)
    actors = [GaussianActor(sizes[0], sizes[-1], rng, sizes[1:-1], scale)
              for _ in range(int(meta["n_agents"]))]
    lookup = {name: (shape, off) for name, shape, off in tensors}
    for i, actor in enumerate(actors):
        for name, t in _actor_tensors(actor):
            shape, off = lookup[f"agent{i}.{name}"]
            n = int(np.prod(shape)) if shape else 1
            if off + n > flat.size:
                raise ValueError(f"{stem}: parameter file truncated")
            t.data = flat[off:off + n].reshape(shape).copy()
    obs_space = Box([float(v) for v in meta["obs_low"].split(",")],
                    [float(v) for v in meta["obs_high"].split(",")])
    return FarmPolicy(actors, obs_space, meta["algo"])

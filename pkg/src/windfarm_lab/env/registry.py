"""Environment ids: ``[Dec_]<Layout>_<Static|Dynamic>``."""

from ..wake.layout import layout_names
from .config import EnvConfig, read_config
from .farm_env import FarmEnv
from .multiagent import DecFarmEnv, CentralizedFarmEnv

SIMULATOR_SUFFIX = {"Static": "static", "Dynamic": "dynamic", "Floris": "static", "Fastfarm": "dynamic"}
_CANONICAL = ("Static", "Dynamic")


def env_ids():
    return [f"{prefix}{name}_{suffix}" for prefix in ("Dec_", "") for name in layout_names()
            for suffix in _CANONICAL]


def parse_env_id(env_id):
    """Split an id into (layout name, simulator, decentralized)."""
    decentralized = env_id.startswith("Dec_")
    body = env_id[4:] if decentralized else env_id
    layout, _, suffix = body.rpartition("_")
    if suffix not in SIMULATOR_SUFFIX or layout not in layout_names():
        raise KeyError(f"unknown environment id {env_id!r}; valid ids: {', '.join(env_ids())}")
    return layout, SIMULATOR_SUFFIX[suffix], decentralized


def make_env(env_id, config=None, config_file=None, reward_shaper=None, **overrides):
    """Build the per-agent (``Dec_`` prefix) or centralized env for ``env_id``.

    Settings come from ``config`` (an EnvConfig), then ``config_file``
    (key=value lines), then keyword overrides.
    """
    layout, simulator, decentralized = parse_env_id(env_id)
    settings = dict(read_config(config_file)) if config_file else {}
    settings.update(overrides)
    settings.update(layout=layout, simulator=simulator)
    if config is None:
        cfg = EnvConfig(**settings)
    else:
        if config.simulator != simulator:
            settings.setdefault("controls", None)
        cfg = config.replace(**settings)
    core = FarmEnv(cfg, reward_shaper=reward_shaper)
    return DecFarmEnv(core) if decentralized else CentralizedFarmEnv(core)

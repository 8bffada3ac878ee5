"""
src/utils/config.py
Loads config.yaml and merges command-line overrides into run settings.

config.yaml has one mapping per stage:

    enumeration   coset_limit, lookahead_margin        (Todd-Coxeter)
    groups        intersection_budget, seed            (Schreier-Sims, sampling)
    lattice       face_budget, exhaustive_flag_limit, flag_samples
    graphs        aut_timeout, iso_timeout, s_cap, aut_vertex_limit
    runner        workers, deep, out                   (preset-all, --deep, --out)
    presets       directory                            (relative to the project root)
    logging       enabled, verbose                     (read by src.utils.log)

Missing sections fall back to the RunConfig defaults.
"""

import yaml
from dataclasses import dataclass
from pathlib import Path


ROOT_DIR = Path(__file__).resolve().parent.parent.parent

SECTIONS = ("enumeration", "groups", "lattice", "graphs", "runner", "presets", "logging")


def load_config(path: str = None) -> dict:
    """
    Parse config.yaml (the project copy unless `path` is given).
    A file that is not a mapping of known sections raises ValueError,
    which main.py reports as a usage error.
    """
    if path is None:
        path = ROOT_DIR / "config.yaml"
    with open(path, "r") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ValueError(f"{path}: not valid YAML ({e})") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping of sections, got {type(data).__name__}")
    unknown = sorted(str(k) for k in data if k not in SECTIONS)
    if unknown:
        raise ValueError(f"{path}: unknown section(s) {', '.join(unknown)}; "
                         f"expected some of {', '.join(SECTIONS)}")
    for name, body in data.items():
        if body is not None and not isinstance(body, dict):
            raise ValueError(f"{path}: section '{name}' must be a mapping")
    return data


class Config:
    """Read-only view of the parsed sections: config.get('graphs', 'aut_timeout', default=60)."""

    def __init__(self, config_dict: dict):
        self._data = config_dict or {}

    def get(self, *keys, default=None):
        val = self._data
        for k in keys:
            if not isinstance(val, dict) or val.get(k) is None:
                return default
            val = val[k]
        return val

    def section(self, name: str) -> dict:
        return dict(self._data.get(name) or {})

    @classmethod
    def from_file(cls, path: str = None) -> "Config":
        return cls(load_config(path))

    def __repr__(self):
        return f"Config(sections={sorted(self._data)})"


@dataclass
class RunConfig:
    """Budgets and switches for one CLI run. Flags override config.yaml."""

    coset_limit: int = 2_000_000
    lookahead_margin: int = 64
    intersection_budget: int = 1_000_000
    face_budget: int = 100_000
    exhaustive_flag_limit: int = 100_000
    flag_samples: int = 200
    aut_timeout: float = 60.0
    iso_timeout: float = 60.0
    s_cap: int = 16
    aut_vertex_limit: int = 2000
    seed: int = 1
    workers: int = 1
    deep: bool = False
    out: str = None
    preset_dir: str = None

    def __post_init__(self):
        for name in ("coset_limit", "intersection_budget", "face_budget",
                     "aut_timeout", "iso_timeout", "s_cap", "aut_vertex_limit", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    @classmethod
    def from_config(cls, config: Config) -> "RunConfig":
        preset_dir = config.get("presets", "directory", default="presets")
        if preset_dir and not Path(preset_dir).is_absolute():
            preset_dir = str(ROOT_DIR / preset_dir)
        return cls(
            coset_limit=config.get("enumeration", "coset_limit", default=2_000_000),
            lookahead_margin=config.get("enumeration", "lookahead_margin", default=64),
            intersection_budget=config.get("groups", "intersection_budget", default=1_000_000),
            seed=config.get("groups", "seed", default=1),
            face_budget=config.get("lattice", "face_budget", default=100_000),
            exhaustive_flag_limit=config.get("lattice", "exhaustive_flag_limit", default=100_000),
            flag_samples=config.get("lattice", "flag_samples", default=200),
            aut_timeout=config.get("graphs", "aut_timeout", default=60),
            iso_timeout=config.get("graphs", "iso_timeout", default=60),
            s_cap=config.get("graphs", "s_cap", default=16),
            aut_vertex_limit=config.get("graphs", "aut_vertex_limit", default=2000),
            workers=config.get("runner", "workers", default=1),
            deep=bool(config.get("runner", "deep", default=False)),
            out=config.get("runner", "out", default=None),
            preset_dir=preset_dir,
        )

    @classmethod
    def from_args(cls, args, config: Config) -> "RunConfig":
        """Config values first, then any flag the user actually passed."""
        run = cls.from_config(config)
        overrides = {
            "coset_limit": getattr(args, "limit", None),
            "aut_timeout": getattr(args, "timeout", None),
            "iso_timeout": getattr(args, "timeout", None),
            "out": getattr(args, "out", None),
            "workers": getattr(args, "workers", None),
        }
        for key, value in overrides.items():
            if value is not None:
                setattr(run, key, value)
        if getattr(args, "deep", False):
            run.deep = True
        run.__post_init__()
        return run

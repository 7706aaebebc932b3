"""Experiment configuration: defaults, YAML loading and snapshots."""

import copy
from dataclasses import asdict, dataclass, field

import yaml

from ..connection import PRESETS


class ConfigError(ValueError):
    pass


@dataclass
class PointsConfig:
    kind: str = "france"          # france | uniform | grid | file
    cities: str = None            # city YAML; None means the bundled file
    grid: tuple = (60, 60)
    total_n: int = 6000
    n: int = 200                  # uniform point count
    bbox: tuple = (8.0, 8.0)
    path: str = None              # for kind == file


@dataclass
class WalkConfig:
    num_walks: int = 100
    steps: int = 100
    delay: int = 10
    start: str = None             # city name; None means the city config's ``start``
    start_xy: tuple = None


@dataclass
class SweepConfig:
    r_min: float = 0.15           # exclusive
    r_max: float = 4.0
    count: int = 40


@dataclass
class Figure1Config:
    n: int = 200
    side: float = 8.0
    levels: int = 100


@dataclass
class ExperimentConfig:
    seed: int = 2024
    iterations: int = 20
    tol: float = 1e-8
    phi: str = "U"
    scenarios: tuple = ("U", "S", "C", "I")
    points: PointsConfig = field(default_factory=PointsConfig)
    walks: WalkConfig = field(default_factory=WalkConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    figure1: Figure1Config = field(default_factory=Figure1Config)

    def validate(self):
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if self.tol <= 0:
            raise ConfigError("tol must be positive")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        for s in self.scenarios:
            if s.upper() not in PRESETS:
                raise ConfigError(f"unknown scenario preset {s!r}")
        if self.points.kind not in ("france", "uniform", "grid", "file"):
            raise ConfigError(f"unknown point set kind {self.points.kind!r}")
        if self.points.kind == "file" and not self.points.path:
            raise ConfigError("points.kind = file needs points.path")
        if self.sweep.count < 2 or not 0 <= self.sweep.r_min < self.sweep.r_max:
            raise ConfigError("sweep needs count >= 2 and 0 <= r_min < r_max")
        if self.walks.steps < 0 or self.walks.num_walks < 1 or self.walks.delay < 0:
            raise ConfigError("invalid walk parameters")
        return self

    def to_dict(self):
        d = asdict(self)
        return _plain(d)


def _plain(x):
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


_SECTIONS = {"points": PointsConfig, "walks": WalkConfig, "sweep": SweepConfig, "figure1": Figure1Config}


def from_dict(doc) -> ExperimentConfig:
    doc = copy.deepcopy(doc or {})
    cfg = ExperimentConfig()
    for key, value in doc.items():
        if key in _SECTIONS:
            section = getattr(cfg, key)
            if not isinstance(value, dict):
                raise ConfigError(f"section {key!r} must be a mapping")
            for k, v in value.items():
                if not hasattr(section, k):
                    raise ConfigError(f"unknown key {key}.{k}")
                setattr(section, k, tuple(v) if isinstance(v, list) else v)
        elif hasattr(cfg, key):
            setattr(cfg, key, tuple(value) if isinstance(value, list) else value)
        else:
            raise ConfigError(f"unknown config key {key!r}")
    try:
        cfg.seed = int(cfg.seed)
        cfg.iterations = int(cfg.iterations)
        cfg.tol = float(cfg.tol)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def load_config(path=None, **overrides) -> ExperimentConfig:
    doc = {}
    if path is not None:
        try:
            with open(path) as fh:
                doc = yaml.safe_load(fh) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    for k, v in overrides.items():
        if v is not None:
            doc[k] = v
    return from_dict(doc)


def write_snapshot(cfg: ExperimentConfig, path):
    with open(path, "w") as fh:
        yaml.safe_dump(cfg.to_dict(), fh, sort_keys=True)

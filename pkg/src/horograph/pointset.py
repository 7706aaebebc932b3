"""Vertex sets: uniform squares, grids, city mixtures and the France model."""

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import NamedTuple, Sequence

import numpy as np
import yaml


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class CitySpec:
    name: str
    center: Point
    weight: float
    stddev: float = 0.25

    def __post_init__(self):
        if not self.weight >= 0:
            raise ValueError(f"city {self.name!r}: weight must be >= 0")
        if not self.stddev > 0:
            raise ValueError(f"city {self.name!r}: stddev must be > 0")


@dataclass(frozen=True, eq=False)
class PointSet:
    """Ordered, immutable point cloud. Vertex ``i`` is row ``i`` of ``coords``."""

    coords: np.ndarray
    bbox: tuple = (8.0, 8.0)
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.array(self.coords, dtype=np.float64).reshape(-1, 2)
        if not np.all(np.isfinite(c)):
            raise ValueError("coordinates must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "bbox", (float(self.bbox[0]), float(self.bbox[1])))

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        x, y = self.coords[i]
        return Point(float(x), float(y))

    @property
    def points(self):
        return [Point(float(x), float(y)) for x, y in self.coords]

    @property
    def xs(self):
        return self.coords[:, 0]

    @property
    def ys(self):
        return self.coords[:, 1]

    @property
    def diagonal(self):
        return math.hypot(*self.bbox)

    def nearest(self, x, y):
        d2 = (self.xs - x) ** 2 + (self.ys - y) ** 2
        return int(np.argmin(d2))

    def __eq__(self, other):
        return isinstance(other, PointSet) and np.array_equal(self.coords, other.coords)

    __hash__ = None


def concat(a: PointSet, b: PointSet, label="") -> PointSet:
    return PointSet(np.vstack([a.coords, b.coords]), a.bbox, label or a.label)


def distance(p, q) -> float:
    """Euclidean distance between two points."""
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return math.sqrt(dx * dx + dy * dy)


def sample_uniform(n, width, height, seed) -> PointSet:
    if n < 1:
        raise ValueError("n must be >= 1")
    if width <= 0 or height <= 0:
        raise ValueError("width and height must be positive")
    rng = np.random.default_rng(seed)
    coords = rng.uniform(0.0, 1.0, size=(n, 2)) * np.array([width, height])
    return PointSet(coords, (width, height), f"uniform-{n}")


def make_grid(nx, ny, width, height) -> PointSet:
    """Cell-centred ``nx`` by ``ny`` mesh; spacing is ``width/nx`` by ``height/ny``."""
    if nx < 2 or ny < 2:
        raise ValueError("grid needs at least 2 points per axis")
    gx = (np.arange(nx) + 0.5) * (width / nx)
    gy = (np.arange(ny) + 0.5) * (height / ny)
    # x varies fastest within a row
    X, Y = np.meshgrid(gx, gy)
    coords = np.column_stack([X.ravel(), Y.ravel()])
    return PointSet(coords, (width, height), f"grid-{nx}x{ny}")


def allocate_counts(weights: Sequence[float], n: int) -> list:
    """Largest-remainder apportionment of ``n`` items by ``weights``.

    Ties among equal remainders go to the earlier entry.
    """
    w = [Fraction(x) for x in weights]
    if any(x < 0 for x in w):
        raise ValueError("weights must be nonnegative")
    total = sum(w)
    if total == 0:
        raise ValueError("at least one weight must be positive")
    quotas = [n * x / total for x in w]
    counts = [math.floor(q) for q in quotas]
    leftover = n - sum(counts)
    order = sorted(range(len(w)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:leftover]:
        counts[i] += 1
    return counts


def sample_city_mixture(cities: Sequence[CitySpec], n, bbox=(8.0, 8.0), seed=0) -> PointSet:
    """Draw ``n`` points from per-city isotropic normals, resampling outside ``bbox``."""
    if not cities:
        raise ValueError("need at least one city")
    counts = allocate_counts([c.weight for c in cities], n)
    width, height = bbox
    children = np.random.SeedSequence(seed).spawn(len(cities))
    chunks = []
    for city, count, ss in zip(cities, counts, children):
        rng = np.random.default_rng(ss)
        got = np.empty((0, 2))
        while len(got) < count:
            draw = rng.normal(city.center, city.stddev, size=(count - len(got), 2))
            inside = (
                (draw[:, 0] >= 0) & (draw[:, 0] <= width)
                & (draw[:, 1] >= 0) & (draw[:, 1] <= height)
            )
            got = np.vstack([got, draw[inside]])
        chunks.append(got)
    coords = np.vstack(chunks) if chunks else np.empty((0, 2))
    ps = PointSet(coords, bbox, "cities")
    ps.meta["city_counts"] = dict(zip((c.name for c in cities), counts))
    return ps


def france_model(cities, grid_nx=60, grid_ny=60, total_n=6000, bbox=(8.0, 8.0), seed=0) -> PointSet:
    """Countryside grid followed by city points; grid indices come first."""
    n_grid = grid_nx * grid_ny
    if total_n <= n_grid:
        raise ValueError(f"total_n={total_n} must exceed the grid size {n_grid}")
    grid = make_grid(grid_nx, grid_ny, *bbox)
    towns = sample_city_mixture(cities, total_n - n_grid, bbox, seed)
    ps = concat(grid, towns, label="france")
    ps.meta.update(towns.meta, n_grid=n_grid)
    return ps


# -- config and CSV -------------------------------------------------------

def default_city_config_path():
    return resources.files("horograph") / "data" / "france_cities.yaml"


def load_cities(path=None):
    """Read a city config; returns ``(cities, extras)`` where extras holds
    the remaining top-level keys (e.g. ``start``)."""
    if path is None:
        text = default_city_config_path().read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    doc = yaml.safe_load(text) or {}
    default_sd = float(doc.get("default_stddev", 0.25))
    cities = [
        CitySpec(
            name=str(c["name"]),
            center=Point(float(c["cx"]), float(c["cy"])),
            weight=float(c["weight"]),
            stddev=float(c.get("stddev", default_sd)),
        )
        for c in doc.get("cities", [])
    ]
    extras = {k: v for k, v in doc.items() if k != "cities"}
    return cities, extras


def city_by_name(cities, name):
    for c in cities:
        if c.name.lower() == name.lower():
            return c
    raise KeyError(name)


def write_csv(ps: PointSet, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "x", "y"])
        for i, (x, y) in enumerate(ps.coords):
            w.writerow([i, repr(float(x)), repr(float(y))])


def read_csv(path, bbox=None, label="") -> PointSet:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    ids = [int(r["id"]) for r in rows]
    if ids != list(range(len(rows))):
        raise ValueError(f"{path}: ids must be 0..n-1 in order")
    coords = np.array([[float(r["x"]), float(r["y"])] for r in rows]).reshape(-1, 2)
    if bbox is None:
        bbox = (float(np.ceil(coords[:, 0].max())), float(np.ceil(coords[:, 1].max()))) if len(coords) else (1.0, 1.0)
    return PointSet(coords, bbox, label or str(path))

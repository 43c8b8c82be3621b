"""Structured point-set generators and the point-set file format.

Every generator emits points inside the unit cube [0,1]^d and is a pure
function of its arguments: the same call (including the seed) reproduces the
same point set byte for byte after serialization.  Random draws come from
numpy's PCG64, a named, seedable 64-bit generator whose streams are identical
across platforms.

The text file format (UTF-8, LF newlines):

    pointset v1 d=<d> n=<n>
    # generator=<name>            (optional meta, one `# key=value` per line)
    # seed=<int>
    # nominal_dimension=<float>
    # separation=<float>
    <coord_1> ... <coord_d>       (n rows, 17 significant digits, single spaces)

Parsers reject dimension/count mismatches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CapacityError

DEFAULT_POINT_BUDGET = 10**6

_FLOAT_FMT = "{:.17g}"  # lossless for IEEE-754 doubles


def format_float(x: float) -> str:
    """Render a float with 17 significant digits (bit-exact round trip)."""
    return _FLOAT_FMT.format(float(x))


@dataclass(frozen=True)
class PointSetMeta:
    """Provenance attached to a generated point set."""

    generator: str = "unknown"
    seed: int | None = None
    nominal_dimension: float | None = None
    separation: float | None = None


@dataclass(frozen=True)
class PointSet:
    """An ordered n-point configuration in [0,1]^d.

    The coordinate array is made read-only on construction; point sets are
    safe to share across concurrent readers.
    """

    dim: int
    points: np.ndarray
    meta: PointSetMeta = field(default_factory=PointSetMeta)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        pts = np.array(self.points, dtype=float, copy=True, order="C")
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ValueError(
                f"points must be an (n, {self.dim}) array, got shape {pts.shape}"
            )
        if pts.shape[0] < 1:
            raise ValueError("a point set holds at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("coordinates must be finite")
        if pts.min() < 0.0 or pts.max() > 1.0:
            raise ValueError("coordinates must lie in [0,1]")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return int(self.points.shape[0])


@dataclass(frozen=True)
class GeneratorSpec:
    """A generator family plus its parameters.

    kind is one of lattice, cantor_product, homogeneous, uniform_random,
    coplanar, from_file; params are kind-specific and validated before
    generation.
    """

    kind: str
    params: tuple[tuple[str, object], ...]

    @classmethod
    def make(cls, kind: str, **params) -> "GeneratorSpec":
        return cls(kind=kind, params=tuple(sorted(params.items())))

    def as_dict(self) -> dict:
        return dict(self.params)


def _check_budget(n: int, budget: int) -> None:
    if n > budget:
        raise CapacityError(f"requested {n} points exceeds the budget of {budget}")


def gen_lattice(d: int, m: int, budget: int = DEFAULT_POINT_BUDGET) -> PointSet:
    """The grid {0, 1/(m-1), ..., 1}^d; m = 1 gives the single origin point."""
    if d < 1 or m < 1:
        raise ValueError("need d >= 1 and m >= 1")
    n = m**d
    _check_budget(n, budget)
    axis = np.linspace(0.0, 1.0, m) if m >= 2 else np.array([0.0])
    pts = _product_points(axis, d)
    sep = 1.0 / (m - 1) if m >= 2 else None
    meta = PointSetMeta(generator="lattice", nominal_dimension=float(d), separation=sep)
    return PointSet(dim=d, points=pts, meta=meta)


def cantor_endpoints(r: float, level: int) -> np.ndarray:
    """Sorted left endpoints of the level-`level` intervals of the ratio-r
    Cantor construction on [0,1]."""
    e = np.array([0.0])
    for _ in range(level):
        e = np.concatenate([e * r, (1.0 - r) + e * r])
    return e


def gen_cantor(d: int, r: float, level: int, budget: int = DEFAULT_POINT_BUDGET) -> PointSet:
    """d-fold product of the ratio-r Cantor set, truncated at `level`.

    Emits the left endpoints of the surviving intervals (exactly
    representable by the recursion, unlike midpoints), so n = 2^(d*level).
    The nominal dimension of the limiting set is d*log(2)/log(1/r).
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if not (0.0 < r < 0.5):
        raise ValueError("contraction ratio must satisfy 0 < r < 1/2")
    if level < 0:
        raise ValueError("level must be >= 0")
    n = 2 ** (d * level)
    _check_budget(n, budget)
    axis = cantor_endpoints(r, level)
    pts = _product_points(axis, d)
    sep = float(np.diff(axis).min()) if level >= 1 else None
    meta = PointSetMeta(
        generator="cantor_product",
        nominal_dimension=d * math.log(2.0) / math.log(1.0 / r),
        separation=sep,
    )
    return PointSet(dim=d, points=pts, meta=meta)


def gen_random(d: int, n: int, seed: int, budget: int = DEFAULT_POINT_BUDGET) -> PointSet:
    """n i.i.d. uniform points in [0,1]^d (PCG64 stream of `seed`)."""
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    _check_budget(n, budget)
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = rng.random((n, d))
    meta = PointSetMeta(generator="uniform_random", seed=seed, nominal_dimension=float(d))
    return PointSet(dim=d, points=pts, meta=meta)


def gen_coplanar(d: int, n: int, seed: int, budget: int = DEFAULT_POINT_BUDGET) -> PointSet:
    """n uniform points in the degenerate slice {x_d = 1/2} of [0,1]^d."""
    if d < 2:
        raise ValueError("coplanar sets need d >= 2")
    if n < 1:
        raise ValueError("need n >= 1")
    _check_budget(n, budget)
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = np.empty((n, d))
    pts[:, : d - 1] = rng.random((n, d - 1))
    pts[:, d - 1] = 0.5
    meta = PointSetMeta(generator="coplanar", seed=seed, nominal_dimension=float(d - 1))
    return PointSet(dim=d, points=pts, meta=meta)


def gen_homogeneous(
    d: int, m: int, seed: int, jitter: float = 0.25, budget: int = DEFAULT_POINT_BUDGET
) -> PointSet:
    """A jittered lattice: one uniform point per grid cell, confined to the
    central sub-cube of side 2*jitter so the set stays (1-2*jitter)/m separated."""
    if d < 1 or m < 1:
        raise ValueError("need d >= 1 and m >= 1")
    if not (0.0 <= jitter < 0.5):
        raise ValueError("jitter must lie in [0, 1/2)")
    n = m**d
    _check_budget(n, budget)
    rng = np.random.Generator(np.random.PCG64(seed))
    cells = _product_points(np.arange(m, dtype=float), d)
    offsets = (rng.random((n, d)) - 0.5) * (2.0 * jitter)
    pts = (cells + 0.5 + offsets) / m
    meta = PointSetMeta(generator="homogeneous", seed=seed, nominal_dimension=float(d))
    return PointSet(dim=d, points=pts, meta=meta)


def _product_points(axis: np.ndarray, d: int) -> np.ndarray:
    """Row-major cartesian power of a 1-d coordinate axis."""
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def generate(spec: GeneratorSpec, budget: int = DEFAULT_POINT_BUDGET) -> PointSet:
    """Dispatch a GeneratorSpec to the matching generator."""
    p = spec.as_dict()
    try:
        if spec.kind == "lattice":
            return gen_lattice(int(p["d"]), int(p["m"]), budget=budget)
        if spec.kind == "cantor_product":
            return gen_cantor(int(p["d"]), float(p["r"]), int(p["L"]), budget=budget)
        if spec.kind == "uniform_random":
            return gen_random(int(p["d"]), int(p["n"]), int(p["seed"]), budget=budget)
        if spec.kind == "coplanar":
            return gen_coplanar(int(p["d"]), int(p["n"]), int(p["seed"]), budget=budget)
        if spec.kind == "homogeneous":
            return gen_homogeneous(
                int(p["d"]),
                int(p["m"]),
                int(p["seed"]),
                jitter=float(p.get("jitter", 0.25)),
                budget=budget,
            )
        if spec.kind == "from_file":
            return load_pointset(p["path"])
    except KeyError as exc:
        raise ValueError(f"generator '{spec.kind}' is missing parameter {exc}") from None
    raise ValueError(f"unknown generator kind '{spec.kind}'")


def format_pointset(ps: PointSet) -> str:
    """Serialize to the text format (see module docstring)."""
    lines = [f"pointset v1 d={ps.dim} n={ps.n}"]
    meta = ps.meta
    lines.append(f"# generator={meta.generator}")
    if meta.seed is not None:
        lines.append(f"# seed={meta.seed}")
    if meta.nominal_dimension is not None:
        lines.append(f"# nominal_dimension={format_float(meta.nominal_dimension)}")
    if meta.separation is not None:
        lines.append(f"# separation={format_float(meta.separation)}")
    for row in ps.points:
        lines.append(" ".join(format_float(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_pointset(text: str) -> PointSet:
    """Parse the text format; rejects dimension/count mismatches."""
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty point-set file")
    header = lines[0].split()
    if len(header) != 4 or header[0] != "pointset" or header[1] != "v1":
        raise ValueError(f"bad header line: {lines[0]!r}")
    try:
        d = int(_expect_kv(header[2], "d"))
        n = int(_expect_kv(header[3], "n"))
    except ValueError as exc:
        raise ValueError(f"bad header line: {lines[0]!r}") from exc

    meta_kv: dict[str, str] = {}
    rows: list[list[float]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta_kv[key.strip()] = value.strip()
            continue
        parts = line.split()
        if len(parts) != d:
            raise ValueError(f"line {lineno}: expected {d} coordinates, got {len(parts)}")
        try:
            rows.append([float(x) for x in parts])
        except ValueError:
            raise ValueError(f"line {lineno}: unparseable coordinate") from None
    if len(rows) != n:
        raise ValueError(f"expected {n} points, found {len(rows)}")

    meta = PointSetMeta(
        generator=meta_kv.get("generator", "unknown"),
        seed=int(meta_kv["seed"]) if "seed" in meta_kv else None,
        nominal_dimension=(
            float(meta_kv["nominal_dimension"]) if "nominal_dimension" in meta_kv else None
        ),
        separation=float(meta_kv["separation"]) if "separation" in meta_kv else None,
    )
    return PointSet(dim=d, points=np.array(rows, dtype=float), meta=meta)


def _expect_kv(token: str, key: str) -> str:
    k, _, v = token.partition("=")
    if k != key or not v:
        raise ValueError(f"expected {key}=<value>, got {token!r}")
    return v


def save_pointset(ps: PointSet, path) -> None:
    Path(path).write_text(format_pointset(ps), encoding="utf-8", newline="\n")


def load_pointset(path) -> PointSet:
    return parse_pointset(Path(path).read_text(encoding="utf-8"))

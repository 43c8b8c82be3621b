"""Dimension-threshold registry and count-growth scan harness.

Closed forms, per configuration family (k+1 points in R^d, nominal set
dimension s):

    simplex : threshold  s0(k, d) = d - (d-1)/(2k),   1 <= k <= d
              exponent   k+1 - C(k+1,2)/s
    volume  : threshold  d-1 + 1/(2d)   (d even),  d-1 + 1/(2(d-1))  (d odd)
              exponent   d+1 - 1/s
    area2   : threshold  d/2 + 1/4      (2-dimensional volumes in R^d)
              exponent   3 - 1/s
    angle   : threshold  (d+1)/2
              exponent   3 - 1/s

Thresholds and exponents are exact rationals when the inputs are exact.  A
scan generates a point family over an increasing n schedule, counts one
fixed configuration at tolerance delta_n = n^(-1/s), checks the bounded-
energy condition at the same s, and compares the fitted log-log growth
slope against the predicted exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable

import numpy as np

from ._ols import ols_line
from .configcount import (
    ConfigQuery,
    CountReport,
    PhiFunction,
    pair_order,
    run_query,
)
from .energy import DEFAULT_ADAPTABILITY_C, EnergyReport, is_adaptable
from .errors import InfeasibleError
from .pointgen import GeneratorSpec, PointSet, generate

SCAN_FAMILIES = ("simplex", "volume", "area2", "angle", "custom")


def threshold(family: str, k: int, d: int):
    """Dimension threshold above which the family's configuration set has
    positive measure; exact Fraction."""
    if d < 2:
        raise ValueError("thresholds are defined for d >= 2")
    if family == "simplex":
        if not (1 <= k <= d):
            raise ValueError(f"simplex thresholds need 1 <= k <= d, got k={k}, d={d}")
        return Fraction(d) - Fraction(d - 1, 2 * k)
    if family == "volume":
        if k != d:
            raise ValueError("volume family has k = d")
        if d % 2 == 0:
            return Fraction(d - 1) + Fraction(1, 2 * d)
        return Fraction(d - 1) + Fraction(1, 2 * (d - 1))
    if family == "area2":
        if k != 2:
            raise ValueError("area2 family has k = 2")
        return Fraction(d, 2) + Fraction(1, 4)
    if family == "angle":
        if k != 2:
            raise ValueError("angle family has k = 2")
        return Fraction(d + 1, 2)
    raise ValueError(f"no threshold formula for family {family!r}")


def count_exponent(family: str, k: int, d: int, s):
    """Predicted growth exponent of the count in n at set dimension s.

    Exact (Fraction) when s is an int or Fraction; float otherwise.
    """
    if isinstance(s, Rational):
        s = Fraction(s)
    else:
        s = float(s)
    if s <= 0:
        raise ValueError("s must be positive")
    if family == "simplex":
        pairs = len(pair_order(k))
        return (k + 1) - Fraction(pairs) / s if isinstance(s, Fraction) else (k + 1) - pairs / s
    if family == "volume":
        if k != d:
            raise ValueError("volume family has k = d")
        one = Fraction(1) if isinstance(s, Fraction) else 1.0
        return (d + 1) - one / s
    if family in ("area2", "angle"):
        one = Fraction(1) if isinstance(s, Fraction) else 1.0
        return 3 - one / s
    raise ValueError(f"no exponent formula for family {family!r}")


@dataclass(frozen=True)
class ThresholdEntry:
    """A registry row: the threshold plus the exponent as a function of s."""

    family: str
    k: int
    d: int
    s_threshold: Fraction
    predicted_count_exponent: Callable[[float], float]


def threshold_entry(family: str, k: int, d: int) -> ThresholdEntry:
    return ThresholdEntry(
        family=family,
        k=k,
        d=d,
        s_threshold=threshold(family, k, d),
        predicted_count_exponent=lambda s: count_exponent(family, k, d, s),
    )


def fit_slope(samples) -> tuple[float, float]:
    """OLS slope and stderr of log y against log n; zero-count samples are
    dropped rather than floored (flooring biases small-n slopes)."""
    kept = [(float(n), float(y)) for n, y in samples if y > 0]
    if len(kept) < 3:
        raise InfeasibleError("need at least 3 positive samples to fit a slope")
    ns, ys = zip(*kept)
    slope, _, stderr = ols_line(np.log(ns), np.log(ys))
    return slope, stderr


# ---------------------------------------------------------------------------
# scans


@dataclass(frozen=True)
class ScanSpec:
    """A generator family, a query template, an n schedule, and a delta rule.

    generator is a size-free template (no m/L/n key); the per-step size is
    derived from the schedule.  With t=None the target is sampled from a
    configuration realized by the largest-n point set.  With s=None the
    generator's nominal dimension drives delta_n = n^(-1/s).  Per-step seeds
    are base seed + step index.
    """

    generator: GeneratorSpec
    family: str
    k: int
    schedule: tuple[int, ...]
    seed: int = 0
    s: float | None = None
    t: tuple[float, ...] | None = None
    delta: float | None = None
    predicted: float | None = None
    adaptability_C: float = DEFAULT_ADAPTABILITY_C
    algorithm: str = "pruned"
    volume_convention: str = "bare_determinant"
    phi: PhiFunction | None = None

    def __post_init__(self):
        if self.family not in SCAN_FAMILIES:
            raise ValueError(f"unknown scan family {self.family!r}")
        sched = tuple(int(n) for n in self.schedule)
        if len(sched) < 3:
            raise ValueError("schedule needs at least 3 sizes")
        if any(b <= a for a, b in zip(sched, sched[1:])):
            raise ValueError("schedule must be strictly increasing")
        object.__setattr__(self, "schedule", sched)
        if self.family == "custom" and self.phi is None:
            raise ValueError("custom scans need a PhiFunction")
        if self.family == "custom" and self.predicted is None:
            raise ValueError("custom scans need an explicit predicted exponent")


@dataclass(frozen=True)
class ScanRow:
    n: int
    delta: float
    count: int


@dataclass(frozen=True)
class ScanReport:
    family: str
    k: int
    d: int
    s: float
    seed: int
    t: tuple[float, ...]
    rows: tuple[ScanRow, ...]
    fitted_slope: float | None
    stderr: float | None
    predicted: float
    verdict: str  # consistent | exceeds | inconclusive
    energy: tuple[EnergyReport, ...]


def _sized_generator(template: GeneratorSpec, n: int, seed: int) -> GeneratorSpec:
    """Fill a size-free generator template for a target of about n points."""
    p = template.as_dict()
    kind = template.kind
    if kind == "lattice":
        d = int(p["d"])
        return GeneratorSpec.make("lattice", d=d, m=max(1, round(n ** (1.0 / d))))
    if kind == "cantor_product":
        d = int(p["d"])
        level = max(0, round(math.log2(n) / d))
        return GeneratorSpec.make("cantor_product", d=d, r=float(p["r"]), L=level)
    if kind == "homogeneous":
        d = int(p["d"])
        m = max(1, round(n ** (1.0 / d)))
        extra = {"jitter": float(p["jitter"])} if "jitter" in p else {}
        return GeneratorSpec.make("homogeneous", d=d, m=m, seed=seed, **extra)
    if kind == "uniform_random":
        return GeneratorSpec.make("uniform_random", d=int(p["d"]), n=n, seed=seed)
    if kind == "coplanar":
        return GeneratorSpec.make("coplanar", d=int(p["d"]), n=n, seed=seed)
    raise ValueError(f"generator kind {kind!r} cannot be used in scans")


def _sample_target(ps: PointSet, spec: ScanSpec) -> tuple[float, ...]:
    """A target realized by an actual configuration of ps (seeded draw)."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    arity = spec.k + 1 if spec.family != "volume" else ps.dim + 1
    if spec.family in ("area2", "angle"):
        arity = 3
    if spec.phi is not None:
        arity = spec.phi.arity
    if ps.n < arity:
        raise InfeasibleError("point set too small to realize a target configuration")
    idx = rng.choice(ps.n, size=arity, replace=False)
    pts = ps.points[idx]
    if spec.family == "simplex":
        return tuple(
            float(np.sqrt(((pts[i] - pts[j]) ** 2).sum())) for i, j in pair_order(spec.k)
        )
    if spec.family == "volume":
        d = ps.dim
        rows = pts[:d] - pts[d]
        value = abs(float(np.linalg.det(rows)))
        if spec.volume_convention == "simplex":
            value /= math.factorial(d)
        return (value,)
    if spec.family == "area2":
        u, v = pts[0] - pts[2], pts[1] - pts[2]
        gram = float((u * u).sum()) * float((v * v).sum()) - float((u * v).sum()) ** 2
        value = math.sqrt(max(gram, 0.0))
        if spec.volume_convention == "simplex":
            value /= 2.0
        return (value,)
    if spec.family == "angle":
        u, w = pts[1] - pts[0], pts[2] - pts[0]
        cosv = float(np.clip((u * w).sum() / (np.linalg.norm(u) * np.linalg.norm(w)), -1, 1))
        return (float(np.arccos(cosv)),)
    val = np.atleast_1d(np.asarray(spec.phi.evaluator(pts), dtype=float))
    return tuple(float(x) for x in val)


def run_scan(spec: ScanSpec) -> ScanReport:
    """Count one fixed configuration across the n schedule and fit the growth.

    Per step: delta_n = n^(-1/s) on the actual generated size (unless a fixed
    delta override is given), a bounded-energy check at the same s, then one
    exact count.  Verdict: `exceeds` only when slope - 2*stderr > predicted,
    `inconclusive` when more than half the counts are zero or the fit is
    impossible, `consistent` otherwise.
    """
    sets: list[PointSet] = []
    for i, n in enumerate(spec.schedule):
        gspec = _sized_generator(spec.generator, n, spec.seed + i)
        sets.append(generate(gspec))

    d = sets[-1].dim
    if spec.s is not None:
        s = float(spec.s)
    else:
        s = sets[-1].meta.nominal_dimension
        if s is None:
            raise ValueError("generator has no nominal dimension; pass s explicitly")

    t = spec.t if spec.t is not None else _sample_target(sets[-1], spec)
    if spec.predicted is not None:
        predicted = float(spec.predicted)
    else:
        predicted = float(count_exponent(spec.family, spec.k, d, s))

    rows: list[ScanRow] = []
    energies: list[EnergyReport] = []
    for ps in sets:
        delta_n = spec.delta if spec.delta is not None else ps.n ** (-1.0 / s)
        query = ConfigQuery(
            family=spec.family,
            k=spec.k if spec.family != "volume" else d,
            t=t,
            delta=float(delta_n),
            volume_convention=spec.volume_convention,
        )
        report: CountReport = run_query(ps, query, algorithm=spec.algorithm, phi=spec.phi)
        rows.append(ScanRow(n=ps.n, delta=float(delta_n), count=report.count))
        energies.append(is_adaptable(ps, s, spec.adaptability_C))

    zeros = sum(1 for r in rows if r.count == 0)
    slope: float | None
    stderr: float | None
    if zeros > len(rows) / 2:
        slope, stderr, verdict = None, None, "inconclusive"
    else:
        try:
            slope, stderr = fit_slope([(r.n, r.count) for r in rows])
        except InfeasibleError:
            slope, stderr, verdict = None, None, "inconclusive"
        else:
            verdict = "exceeds" if slope - 2.0 * stderr > predicted else "consistent"

    return ScanReport(
        family=spec.family,
        k=spec.k,
        d=d,
        s=float(s),
        seed=spec.seed,
        t=tuple(float(x) for x in t),
        rows=tuple(rows),
        fitted_slope=slope,
        stderr=stderr,
        predicted=predicted,
        verdict=verdict,
        energy=tuple(energies),
    )

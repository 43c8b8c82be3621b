"""Exact counting of approximate point configurations.

All counts run over ORDERED tuples of DISTINCT points (distinct indices).
Interval predicates are closed, |value - target| <= delta, except for the
generic configuration-map counter, which uses a strict max-norm ball
|Phi(tuple) - t|_inf < delta.  Counts are exact integers; there is no
sampling in this module.

Families
--------
simplex : k+1 points; every pairwise distance pinned to a target vector
          t = (t_ij) in lexicographic pair order (1,2),(1,3),...,(k,k+1).
volume  : d+1 points in R^d; |det(x^1-x^{d+1}, ..., x^d-x^{d+1})| pinned,
          either bare (``bare_determinant``) or divided by d! (``simplex``).
area2   : 3 points in any ambient dimension; parallelogram area (Gram
          determinant root) pinned, or the triangle area under ``simplex``.
angle   : 3 points; the angle at the first vertex pinned.
custom  : arbitrary configuration map, counted by full enumeration.

The optimized counters ("pruned") and the plain exhaustive oracles
("brute") implement identical contracts and must agree exactly.  The
simplex fast path is a uniform-grid candidate search with depth-first
extension, pruning on every partially determined distance constraint; the
other fast paths are vectorized exhaustive evaluations.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._ols import ols_loglog
from .errors import CapacityError
from .pointgen import PointSet

BRUTE_EVAL_BUDGET = 10**9
PHI_EVAL_BUDGET = 10**8
DEGENERATE_APEX_TOL = 1e-12

FAMILIES = ("simplex", "volume", "area2", "angle", "custom")
VOLUME_CONVENTIONS = ("bare_determinant", "simplex")


def pair_order(k: int) -> list[tuple[int, int]]:
    """Lexicographic (i, j), i < j, over k+1 vertex slots (0-based)."""
    return [(i, j) for i in range(k + 1) for j in range(i + 1, k + 1)]


@dataclass(frozen=True)
class ConfigQuery:
    """One counting question: a family, its target, and the tolerance."""

    family: str
    k: int
    t: tuple[float, ...]
    delta: float
    volume_convention: str = "bare_determinant"
    tuple_rule: str = "ordered_distinct"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.tuple_rule != "ordered_distinct":
            raise ValueError("only the ordered_distinct tuple rule is supported")
        if self.volume_convention not in VOLUME_CONVENTIONS:
            raise ValueError(f"unknown volume convention {self.volume_convention!r}")
        object.__setattr__(self, "t", tuple(float(x) for x in np.atleast_1d(self.t)))
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.family == "simplex":
            want = len(pair_order(self.k))
            if len(self.t) != want:
                raise ValueError(f"simplex target needs {want} entries, got {len(self.t)}")
            if any(x <= 0 for x in self.t):
                raise ValueError("simplex targets must be positive")
            if self.delta <= 0:
                raise ValueError("delta must be positive")
        elif self.family in ("volume", "area2"):
            if len(self.t) != 1:
                raise ValueError(f"{self.family} takes a single target value")
            if self.t[0] < 0:
                raise ValueError("volume target must be nonnegative")
            if self.delta < 0:
                raise ValueError("delta must be nonnegative")
        elif self.family == "angle":
            if len(self.t) != 1:
                raise ValueError("angle takes a single target value")
            if not (0.0 <= self.t[0] <= math.pi):
                raise ValueError("angle target must lie in [0, pi]")
            if self.delta <= 0:
                raise ValueError("delta must be positive")
        else:  # custom
            if self.delta <= 0:
                raise ValueError("delta must be positive")

    def validate_for(self, ps: PointSet) -> None:
        """Dimension-dependent compatibility rules."""
        d = ps.dim
        if self.family == "simplex" and not (1 <= self.k <= d):
            raise ValueError(f"simplex family needs 1 <= k <= d, got k={self.k}, d={d}")
        if self.family == "volume" and self.k != d:
            raise ValueError(f"volume family needs k = d, got k={self.k}, d={d}")
        if self.family in ("area2", "angle") and self.k != 2:
            raise ValueError(f"{self.family} family needs k = 2, got k={self.k}")


@dataclass(frozen=True)
class CountReport:
    """Result of one counting run.

    d and seed are carried for serialization (the CSV schema reports them).
    """

    query: ConfigQuery
    n: int
    count: int
    algorithm: str
    elapsed_seconds: float
    d: int
    seed: int | None = None


@dataclass(frozen=True)
class PhiFunction:
    """A deterministic configuration map on (arity) points with values in R^m."""

    arity: int
    output_dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        if self.arity < 2:
            raise ValueError("arity must be >= 2 (at least one configuration edge)")
        if self.output_dim < 1:
            raise ValueError("output_dim must be >= 1")


@dataclass(frozen=True)
class BoxDimReport:
    """Box-counting record: occupied-box counts per scale and the fitted slope."""

    scales: tuple[float, ...]
    counts: tuple[int, ...]
    slope: float
    stderr: float
    degenerate: bool


COUNT_CSV_HEADER = "family,k,d,n,t,delta,count,algorithm,elapsed_seconds,seed"


def count_report_row(report: CountReport, deterministic_body: bool = False) -> str:
    """One CSV row per run.  With deterministic_body the volatile wall-time
    field is left empty so identical runs serialize byte-identically."""
    from .pointgen import format_float

    q = report.query
    tfield = ";".join(format_float(x) for x in q.t)
    elapsed = "" if deterministic_body else format_float(report.elapsed_seconds)
    seed = "" if report.seed is None else str(report.seed)
    return ",".join(
        [
            q.family,
            str(q.k),
            str(report.d),
            str(report.n),
            tfield,
            format_float(q.delta),
            str(report.count),
            report.algorithm,
            elapsed,
            seed,
        ]
    )


# ---------------------------------------------------------------------------
# shared low-level pieces


def _dists_from(pts: np.ndarray, idx: int, sub: np.ndarray | None = None) -> np.ndarray:
    """Euclidean distances from pts[idx] to pts[sub] (or to every point).

    Both counting routes use this helper so their floating-point results are
    bit-identical.
    """
    block = pts if sub is None else pts[sub]
    diff = block - pts[idx]
    return np.sqrt((diff * diff).sum(axis=1))


def _pair_distance_matrix(pts: np.ndarray) -> np.ndarray:
    n = pts.shape[0]
    out = np.empty((n, n))
    for i in range(n):
        out[i] = _dists_from(pts, i)
    return out


class _UniformGrid:
    """Uniform spatial hash with 3^d neighborhood queries."""

    def __init__(self, pts: np.ndarray, cell: float):
        if cell <= 0:
            raise ValueError("cell size must be positive")
        self.cell = cell
        self.keys = np.floor(pts / cell).astype(np.int64)
        buckets: dict[tuple[int, ...], list[int]] = {}
        for i, key in enumerate(map(tuple, self.keys)):
            buckets.setdefault(key, []).append(i)
        self.buckets = {k: np.asarray(v, dtype=np.int64) for k, v in buckets.items()}
        d = pts.shape[1]
        self._offsets = list(itertools.product((-1, 0, 1), repeat=d))
        self._nbr_cache: dict[tuple[int, ...], np.ndarray] = {}

    def neighborhood(self, i: int) -> np.ndarray:
        """Indices of all points in the 3^d cells around point i (incl. i)."""
        key = tuple(self.keys[i])
        cached = self._nbr_cache.get(key)
        if cached is not None:
            return cached
        parts = []
        for off in self._offsets:
            bucket = self.buckets.get(tuple(k + o for k, o in zip(key, off)))
            if bucket is not None:
                parts.append(bucket)
        out = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
        self._nbr_cache[key] = out
        return out


def _target_matrix(k: int, t: tuple[float, ...]) -> np.ndarray:
    tm = np.zeros((k + 1, k + 1))
    for val, (i, j) in zip(t, pair_order(k)):
        tm[i, j] = tm[j, i] = val
    return tm


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


# ---------------------------------------------------------------------------
# simplex family


def count_simplex(
    ps: PointSet, k: int, t, delta: float, algorithm: str = "pruned"
) -> CountReport:
    """Ordered (k+1)-tuples of distinct points whose pairwise distances all
    satisfy t_ij - delta <= |x^i - x^j| <= t_ij + delta."""
    query = ConfigQuery(family="simplex", k=k, t=tuple(np.atleast_1d(t)), delta=float(delta))
    tmat = _target_matrix(k, query.t)
    if algorithm == "pruned":
        count, elapsed = _timed(lambda: _simplex_pruned(ps.points, k, tmat, query.delta))
    elif algorithm == "brute":
        count, elapsed = _timed(lambda: _simplex_brute(ps.points, k, tmat, query.delta))
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return CountReport(
        query=query,
        n=ps.n,
        count=count,
        algorithm=algorithm,
        elapsed_seconds=elapsed,
        d=ps.dim,
        seed=ps.meta.seed,
    )


def count_simplex_brute(ps: PointSet, k: int, t, delta: float) -> CountReport:
    """Independent oracle: exhaustive evaluation over every ordered distinct
    tuple, with no pruning and no spatial index."""
    return count_simplex(ps, k, t, delta, algorithm="brute")


def _simplex_pruned(pts: np.ndarray, k: int, tmat: np.ndarray, delta: float) -> int:
    n = pts.shape[0]
    if n < k + 1:
        return 0
    cell = float(tmat.max() + delta)
    grid = _UniformGrid(pts, cell)
    # every later vertex is constrained to x^1, so one prefilter band applies
    lo0 = float(tmat[0, 1:].min() - delta)
    hi0 = float(tmat[0, 1:].max() + delta)

    total = 0
    for i in range(n):
        nbr = grid.neighborhood(i)
        nbr = nbr[nbr != i]
        if nbr.size < k:
            continue
        d0 = _dists_from(pts, i, nbr)
        keep = (d0 >= lo0) & (d0 <= hi0)
        if not keep.any():
            continue
        nbr = nbr[keep]
        d0 = d0[keep]
        dist_cache: dict[int, np.ndarray] = {}
        total += _simplex_extend(pts, k, tmat, delta, nbr, [d0], [], dist_cache)
    return total


def _simplex_extend(pts, k, tmat, delta, nbr, dvecs, tail, dist_cache) -> int:
    pos = len(dvecs)  # vertex slot being filled next (0-based)
    mask = np.abs(dvecs[0] - tmat[0, pos]) <= delta
    for a in range(1, pos):
        mask &= np.abs(dvecs[a] - tmat[a, pos]) <= delta
    for c in tail:
        mask &= nbr != c
    if pos == k:
        return int(np.count_nonzero(mask))
    total = 0
    for j in np.flatnonzero(mask):
        c = int(nbr[j])
        dnew = dist_cache.get(c)
        if dnew is None:
            dnew = _dists_from(pts, c, nbr)
            dist_cache[c] = dnew
        total += _simplex_extend(pts, k, tmat, delta, nbr, dvecs + [dnew], tail + [c], dist_cache)
    return total


def _simplex_brute(pts: np.ndarray, k: int, tmat: np.ndarray, delta: float) -> int:
    n = pts.shape[0]
    if n < k + 1:
        return 0
    if n ** (k + 1) > BRUTE_EVAL_BUDGET:
        raise CapacityError(f"brute enumeration of {n}^{k + 1} tuples exceeds the budget")
    if k > 3:
        raise ValueError("the brute simplex oracle covers k <= 3")
    D = _pair_distance_matrix(pts)

    def mask(i, j):
        m = np.abs(D - tmat[i, j]) <= delta
        np.fill_diagonal(m, False)
        return m.astype(float)

    if k == 1:
        return int(round(mask(0, 1).sum()))
    if k == 2:
        m01, m02, m12 = mask(0, 1), mask(0, 2), mask(1, 2)
        # sum_{a,b,c} m01[a,b] m02[a,c] m12[b,c]  (exhaustive sum-product)
        return int(round(float(((m01.T @ m02) * m12).sum())))
    m01, m02, m03 = mask(0, 1), mask(0, 2), mask(0, 3)
    m12, m13, m23 = mask(1, 2), mask(1, 3), mask(2, 3)
    total = 0.0
    for a in range(n):
        w = m13 * m03[a]  # w[b,d]
        z = w @ m23.T  # z[b,c] = sum_d w[b,d] m23[c,d]
        total += float(((m12 * z) * m02[a][None, :] * m01[a][:, None]).sum())
    return int(round(total))


# ---------------------------------------------------------------------------
# volume family (d-dimensional simplex volumes, d+1 points)


def count_volume(
    ps: PointSet,
    t: float,
    delta: float,
    convention: str = "bare_determinant",
    algorithm: str = "pruned",
) -> CountReport:
    """Ordered (d+1)-tuples of distinct points with
    |vol_d(x^1,...,x^{d+1}) - t| <= delta, where vol_d is the absolute
    determinant of the edge matrix at x^{d+1} (bare) or that value / d!."""
    d = ps.dim
    query = ConfigQuery(family="volume", k=d, t=(float(t),), delta=float(delta),
                        volume_convention=convention)
    # the simplex convention is the bare count over the d!-rescaled target
    scale = math.factorial(d) if convention == "simplex" else 1.0
    t_bare = query.t[0] * scale
    delta_bare = query.delta * scale
    if algorithm == "pruned":
        count, elapsed = _timed(lambda: _volume_fast(ps.points, t_bare, delta_bare))
    elif algorithm == "brute":
        count, elapsed = _timed(lambda: _volume_brute(ps.points, t_bare, delta_bare))
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return CountReport(query=query, n=ps.n, count=count, algorithm=algorithm,
                       elapsed_seconds=elapsed, d=d, seed=ps.meta.seed)


def count_volume_brute(ps: PointSet, t: float, delta: float,
                       convention: str = "bare_determinant") -> CountReport:
    """Independent oracle: plain nested loops over all ordered tuples."""
    return count_volume(ps, t, delta, convention=convention, algorithm="brute")


def _check_enum_budget(n: int, arity: int) -> None:
    if n**arity > BRUTE_EVAL_BUDGET:
        raise CapacityError(f"enumeration of {n}^{arity} tuples exceeds the budget")


def _volume_fast(pts: np.ndarray, t: float, delta: float) -> int:
    n, d = pts.shape
    if n < d + 1:
        return 0
    _check_enum_budget(n, d + 1)
    if d == 2:
        return _volume_fast_2d(pts, t, delta)
    if d == 3:
        return _volume_fast_3d(pts, t, delta)
    return _volume_generic(pts, t, delta, chunk=1 << 14)


def _volume_fast_2d(pts: np.ndarray, t: float, delta: float) -> int:
    n = pts.shape[0]
    total = 0
    for b in range(n):
        u = pts - pts[b]
        u[b] = np.nan  # NaN rows fail every comparison, excluding index b
        det = u[:, 0][:, None] * u[:, 1][None, :] - u[:, 1][:, None] * u[:, 0][None, :]
        m = np.abs(np.abs(det) - t) <= delta
        np.fill_diagonal(m, False)
        total += int(np.count_nonzero(m))
    return total


def _volume_fast_3d(pts: np.ndarray, t: float, delta: float, chunk: int = 64) -> int:
    n = pts.shape[0]
    total = 0
    for b in range(n):
        u = pts - pts[b]
        u[b] = np.nan
        cross = np.empty((n, n, 3))
        cross[:, :, 0] = u[:, 1][:, None] * u[:, 2][None, :] - u[:, 2][:, None] * u[:, 1][None, :]
        cross[:, :, 1] = u[:, 2][:, None] * u[:, 0][None, :] - u[:, 0][:, None] * u[:, 2][None, :]
        cross[:, :, 2] = u[:, 0][:, None] * u[:, 1][None, :] - u[:, 1][:, None] * u[:, 0][None, :]
        idx = np.arange(n)
        for start in range(0, n, chunk):
            stop = min(start + chunk, n)
            det = np.einsum("ia,jla->ijl", u[start:stop], cross)
            m = np.abs(np.abs(det) - t) <= delta
            rows = idx[start:stop]
            m[rows - start, rows, :] = False  # i == j
            m[rows - start, :, rows] = False  # i == l
            m[:, idx, idx] = False  # j == l
            total += int(np.count_nonzero(m))
    return total


def _volume_generic(pts: np.ndarray, t: float, delta: float, chunk: int) -> int:
    """Chunked exhaustive evaluation for ambient dimension >= 4."""
    n, d = pts.shape
    total = 0
    shape = (n,) * d
    size = n**d
    for b in range(n):
        u = pts - pts[b]
        for start in range(0, size, chunk):
            flat = np.arange(start, min(start + chunk, size))
            idx = np.stack(np.unravel_index(flat, shape), axis=1)  # (m, d)
            ok = idx[:, 0] != b
            for a in range(1, d):
                ok &= idx[:, a] != b
                for a2 in range(a):
                    ok &= idx[:, a] != idx[:, a2]
            if not ok.any():
                continue
            rows = u[idx[ok]]  # (m_ok, d, d)
            det = np.abs(np.linalg.det(rows))
            total += int(np.count_nonzero(np.abs(det - t) <= delta))
    return total


def _volume_brute(pts: np.ndarray, t: float, delta: float) -> int:
    n, d = pts.shape
    if n < d + 1:
        return 0
    _check_enum_budget(n, d + 1)
    total = 0
    if d == 2:
        for i, j, b in itertools.permutations(range(n), 3):
            u0 = pts[i] - pts[b]
            u1 = pts[j] - pts[b]
            det = u0[0] * u1[1] - u0[1] * u1[0]
            if abs(abs(det) - t) <= delta:
                total += 1
        return total
    if d == 3:
        for i, j, l, b in itertools.permutations(range(n), 4):
            u0 = pts[i] - pts[b]
            u1 = pts[j] - pts[b]
            u2 = pts[l] - pts[b]
            c0 = u1[1] * u2[2] - u1[2] * u2[1]
            c1 = u1[2] * u2[0] - u1[0] * u2[2]
            c2 = u1[0] * u2[1] - u1[1] * u2[0]
            det = u0[0] * c0 + u0[1] * c1 + u0[2] * c2
            if abs(abs(det) - t) <= delta:
                total += 1
        return total
    for tup in itertools.permutations(range(n), d + 1):
        rows = pts[list(tup[:-1])] - pts[tup[-1]]
        if abs(abs(float(np.linalg.det(rows))) - t) <= delta:
            total += 1
    return total


# ---------------------------------------------------------------------------
# area2 family (2-dimensional volumes in any ambient dimension, 3 points)


def count_area2(
    ps: PointSet,
    t: float,
    delta: float,
    convention: str = "bare_determinant",
    algorithm: str = "pruned",
) -> CountReport:
    """Ordered triples of distinct points with the parallelogram area
    sqrt(det Gram(x^1-x^3, x^2-x^3)) within delta of t (bare), or the
    triangle area (that value / 2) under the simplex convention."""
    query = ConfigQuery(family="area2", k=2, t=(float(t),), delta=float(delta),
                        volume_convention=convention)
    scale = 2.0 if convention == "simplex" else 1.0
    t_bare = query.t[0] * scale
    delta_bare = query.delta * scale
    if algorithm == "pruned":
        count, elapsed = _timed(lambda: _area2_fast(ps.points, t_bare, delta_bare))
    elif algorithm == "brute":
        count, elapsed = _timed(lambda: _area2_brute(ps.points, t_bare, delta_bare))
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return CountReport(query=query, n=ps.n, count=count, algorithm=algorithm,
                       elapsed_seconds=elapsed, d=ps.dim, seed=ps.meta.seed)


def count_area2_brute(ps: PointSet, t: float, delta: float,
                      convention: str = "bare_determinant") -> CountReport:
    return count_area2(ps, t, delta, convention=convention, algorithm="brute")


def _area2_fast(pts: np.ndarray, t: float, delta: float) -> int:
    n = pts.shape[0]
    if n < 3:
        return 0
    _check_enum_budget(n, 3)
    total = 0
    for b in range(n):
        u = pts - pts[b]
        u[b] = np.nan
        sq = (u * u).sum(axis=1)
        g = np.einsum("id,jd->ij", u, u)
        gram = sq[:, None] * sq[None, :] - g * g
        area = np.sqrt(np.maximum(gram, 0.0))
        m = np.abs(area - t) <= delta
        np.fill_diagonal(m, False)
        total += int(np.count_nonzero(m))
    return total


def _area2_brute(pts: np.ndarray, t: float, delta: float) -> int:
    n = pts.shape[0]
    if n < 3:
        return 0
    _check_enum_budget(n, 3)
    total = 0
    for i, j, b in itertools.permutations(range(n), 3):
        u = pts[i] - pts[b]
        v = pts[j] - pts[b]
        sq_u = float((u * u).sum())
        sq_v = float((v * v).sum())
        g = float(np.einsum("d,d->", u, v))
        gram = sq_u * sq_v - g * g
        area = np.sqrt(np.maximum(gram, 0.0))
        if abs(area - t) <= delta:
            total += 1
    return int(total)


# ---------------------------------------------------------------------------
# angle family


def count_angle(ps: PointSet, theta0: float, delta: float, algorithm: str = "pruned") -> CountReport:
    """Ordered distinct triples with |angle(x^2-x^1, x^3-x^1) - theta0| <= delta.

    The cosine is clamped to [-1, 1] before arccos; triples whose apex legs
    are shorter than 1e-12 have no defined angle and are skipped.
    """
    query = ConfigQuery(family="angle", k=2, t=(float(theta0),), delta=float(delta))
    if ps.n < 3:
        raise ValueError("angle counting needs at least 3 points")
    if algorithm == "pruned":
        count, elapsed = _timed(lambda: _angle_fast(ps.points, query.t[0], query.delta))
    elif algorithm == "brute":
        count, elapsed = _timed(lambda: _angle_brute(ps.points, query.t[0], query.delta))
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return CountReport(query=query, n=ps.n, count=count, algorithm=algorithm,
                       elapsed_seconds=elapsed, d=ps.dim, seed=ps.meta.seed)


def count_angle_brute(ps: PointSet, theta0: float, delta: float) -> CountReport:
    return count_angle(ps, theta0, delta, algorithm="brute")


def _angle_fast(pts: np.ndarray, theta0: float, delta: float) -> int:
    n = pts.shape[0]
    _check_enum_budget(n, 3)
    total = 0
    for a in range(n):
        v = np.delete(pts, a, axis=0) - pts[a]
        norms = np.sqrt((v * v).sum(axis=1))
        good = norms >= DEGENERATE_APEX_TOL
        v = v[good]
        norms = norms[good]
        if v.shape[0] < 2:
            continue
        inner = np.einsum("id,jd->ij", v, v)
        cosv = np.clip(inner / (norms[:, None] * norms[None, :]), -1.0, 1.0)
        theta = np.arccos(cosv)
        m = np.abs(theta - theta0) <= delta
        np.fill_diagonal(m, False)
        total += int(np.count_nonzero(m))
    return total


def _angle_brute(pts: np.ndarray, theta0: float, delta: float) -> int:
    n = pts.shape[0]
    _check_enum_budget(n, 3)
    total = 0
    for a, i, j in itertools.permutations(range(n), 3):
        u = pts[i] - pts[a]
        w = pts[j] - pts[a]
        nu = np.sqrt((u * u).sum())
        nw = np.sqrt((w * w).sum())
        if nu < DEGENERATE_APEX_TOL or nw < DEGENERATE_APEX_TOL:
            continue
        cosv = np.clip(np.einsum("d,d->", u, w) / (nu * nw), -1.0, 1.0)
        theta = float(np.arccos(cosv))
        if abs(theta - theta0) <= delta:
            total += 1
    return total


# ---------------------------------------------------------------------------
# generic Phi-configurations


def count_phi(ps: PointSet, phi: PhiFunction, t, delta: float) -> CountReport:
    """Ordered distinct (arity)-tuples with |Phi(tuple) - t| < delta in the
    max norm on R^m.  Full enumeration; no structural assumptions on Phi."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if t_arr.shape != (phi.output_dim,):
        raise ValueError(f"target length {t_arr.size} != output_dim {phi.output_dim}")
    if delta <= 0:
        raise ValueError("delta must be positive")
    n = ps.n
    if n**phi.arity > PHI_EVAL_BUDGET:
        raise CapacityError(f"{n}^{phi.arity} evaluations exceed the Phi budget")
    query = ConfigQuery(family="custom", k=phi.arity - 1, t=tuple(t_arr), delta=float(delta))
    pts = ps.points

    def run() -> int:
        total = 0
        for tup in itertools.permutations(range(n), phi.arity):
            val = np.atleast_1d(np.asarray(phi.evaluator(pts[list(tup)]), dtype=float))
            if val.shape != (phi.output_dim,):
                raise ValueError("evaluator output length differs from output_dim")
            if np.max(np.abs(val - t_arr)) < delta:
                total += 1
        return total

    count, elapsed = _timed(run)
    return CountReport(query=query, n=n, count=count, algorithm="brute",
                       elapsed_seconds=elapsed, d=ps.dim, seed=ps.meta.seed)


def pairwise_distance_phi(k: int, d: int) -> PhiFunction:
    """The distance-vector configuration map matching the simplex family."""

    def evaluator(points: np.ndarray) -> np.ndarray:
        return np.array(
            [np.sqrt(((points[i] - points[j]) ** 2).sum()) for i, j in pair_order(k)]
        )

    return PhiFunction(arity=k + 1, output_dim=len(pair_order(k)), evaluator=evaluator)


# ---------------------------------------------------------------------------
# congruence classes


def distinct_classes(ps: PointSet, k: int, delta: float) -> int:
    """Number of delta-distinct congruence classes of (k+1)-point subsets.

    Each unordered subset is canonicalized to the lexicographically minimal
    pairwise-distance vector over all (k+1)! vertex relabelings, after
    quantization to the grid delta*Z; classes are distinct canonical vectors.
    Distance vectors cannot see orientation, so mirror images are congruent.
    """
    if not (1 <= k <= 4):
        raise ValueError("canonicalization supports 1 <= k <= 4")
    if delta <= 0:
        raise ValueError("delta must be positive")
    n = ps.n
    if n < k + 1:
        return 0
    pairs = pair_order(k)
    pair_idx = {p: a for a, p in enumerate(pairs)}
    mappings = []
    for sigma in itertools.permutations(range(k + 1)):
        mappings.append(
            tuple(pair_idx[tuple(sorted((sigma[i], sigma[j])))] for i, j in pairs)
        )
    D = _pair_distance_matrix(ps.points)
    classes = set()
    for comb in itertools.combinations(range(n), k + 1):
        q = tuple(int(round(D[comb[i], comb[j]] / delta)) for i, j in pairs)
        classes.add(min(tuple(q[m] for m in mapping) for mapping in mappings))
    return len(classes)


# ---------------------------------------------------------------------------
# box-counting dimension


def box_dim(points, scales) -> BoxDimReport:
    """Box-counting estimate: occupied-box counts N(s) on grids of the given
    scales, and the least-squares slope of log N against log(1/s).

    The grid is anchored at the per-axis data minimum and spans
    ceil(span/s) boxes, the bounding-box formulation; indices are clipped
    into range so boundary points land in the last box.
    """
    if isinstance(points, PointSet):
        pts = points.points
    else:
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError("need a nonempty (n, d) point array")
    scales = [float(s) for s in scales]
    if len(scales) < 3:
        raise ValueError("need at least 3 scales")
    if any(not (0.0 < s < 1.0) for s in scales):
        raise ValueError("scales must lie in (0, 1)")
    mins = pts.min(axis=0)
    spans = pts.max(axis=0) - mins
    counts = []
    for s in scales:
        nboxes = np.maximum(np.ceil(spans / s).astype(np.int64), 1)
        idx = np.clip(((pts - mins) / s).astype(np.int64), 0, nboxes - 1)
        counts.append(int(np.unique(idx, axis=0).shape[0]))
    degenerate = len(set(counts)) == 1
    if degenerate:
        slope, stderr = 0.0, 0.0
    else:
        slope, stderr = ols_loglog([1.0 / s for s in scales], counts)
    return BoxDimReport(
        scales=tuple(scales),
        counts=tuple(counts),
        slope=slope,
        stderr=stderr,
        degenerate=degenerate,
    )


# ---------------------------------------------------------------------------
# dispatch


def run_query(ps: PointSet, query: ConfigQuery, algorithm: str = "pruned",
              phi: PhiFunction | None = None) -> CountReport:
    """Route a ConfigQuery to its counting operation (validating k against d)."""
    query.validate_for(ps)
    if query.family == "simplex":
        return count_simplex(ps, query.k, query.t, query.delta, algorithm=algorithm)
    if query.family == "volume":
        return count_volume(ps, query.t[0], query.delta,
                            convention=query.volume_convention, algorithm=algorithm)
    if query.family == "area2":
        return count_area2(ps, query.t[0], query.delta,
                           convention=query.volume_convention, algorithm=algorithm)
    if query.family == "angle":
        return count_angle(ps, query.t[0], query.delta, algorithm=algorithm)
    if phi is None:
        raise ValueError("custom family needs a PhiFunction")
    return count_phi(ps, phi, query.t, query.delta)

"""Parametric rate-region families: thresholds, boundary curves, and exports.

A family bundles two monotone evaluators f1 (rising, 0 to c1) and f2
(falling, c2+c12 to c12) over a parameter interval [0, b].  Sweeping the
parameter traces rectangles (outer form) or rectangles cut by the sum-rate
line r1 + r2 <= c1 (inner form); the upper-right frontier of their union is
the region boundary.  The threshold parameter, where f1 + f2 crosses c1, is
where the two frontiers separate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .numerics import DEFAULT_TOL, Tolerance, bisect_monotone

_STRICT_SLACK = 1e-12
_ENDPOINT_TOL = 1e-9

SEGMENT_PROVEN = "proven"
SEGMENT_CONJECTURED = "sumrate_conjectured"


class MonotonicityError(RuntimeError):
    """A sweep or family violated a monotonicity guarantee it was supposed to satisfy."""


@dataclass(frozen=True)
class RatePair:
    r1: float
    r2: float


@dataclass(frozen=True)
class ParametricFamily:
    """Monotone boundary evaluators for one channel family at one cooperation rate.

    Construction re-checks the contract on a validation grid: f1 strictly
    increasing from 0 to c1, f2 strictly decreasing from c2+c12 to c12, and
    f1+f2 strictly increasing.  These properties are what make the threshold
    solve well-posed, so a family that fails them is rejected outright.
    """

    b: float
    f1: Callable[[float], float]
    f2: Callable[[float], float]
    c1: float
    c2: float
    c12: float
    validation_points: int = 1000

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"parameter endpoint b must be positive, got {self.b}")
        if self.c12 < 0:
            raise ValueError(f"cooperation rate must be nonnegative, got {self.c12}")
        grid = np.linspace(0.0, self.b, self.validation_points + 1)
        v1 = np.array([self.f1(a) for a in grid])
        v2 = np.array([self.f2(a) for a in grid])
        for name, got, want in (
            ("f1(0)", v1[0], 0.0),
            ("f1(b)", v1[-1], self.c1),
            ("f2(0)", v2[0], self.c2 + self.c12),
            ("f2(b)", v2[-1], self.c12),
        ):
            if abs(got - want) > _ENDPOINT_TOL:
                raise ValueError(f"{name} = {got}, expected {want}")
        if not np.all(np.diff(v1) > _STRICT_SLACK):
            raise ValueError("f1 is not strictly increasing on the validation grid")
        if not np.all(np.diff(v2) < -_STRICT_SLACK):
            raise ValueError("f2 is not strictly decreasing on the validation grid")
        if not np.all(np.diff(v1 + v2) > _STRICT_SLACK):
            raise ValueError("f1 + f2 is not strictly increasing on the validation grid")


@dataclass(frozen=True)
class RateRegionBoundary:
    """Pareto frontier of a 2-D rate region, sorted by increasing r1.

    ``alpha`` carries the family parameter that produced each corner (NaN when
    the frontier did not come from a parametric sweep).  ``segment`` marks
    corners whose full rectangle is a proven part of the capacity boundary
    versus corners that only sit on the conjectured sum-rate face.
    """

    r1: np.ndarray
    r2: np.ndarray
    alpha: np.ndarray
    segment: np.ndarray

    def __post_init__(self):
        r1 = np.asarray(self.r1, dtype=np.float64)
        r2 = np.asarray(self.r2, dtype=np.float64)
        if r1.shape != r2.shape or r1.ndim != 1 or r1.size == 0:
            raise ValueError("r1 and r2 must be equal-length nonempty vectors")
        if np.any(np.diff(r1) <= 0):
            raise ValueError("frontier r1 values must be strictly increasing")
        if np.any(np.diff(r2) > 0):
            raise ValueError("frontier r2 values must be nonincreasing")
        for arr in (r1, r2):
            arr.flags.writeable = False
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)
        alpha = np.asarray(self.alpha, dtype=np.float64)
        segment = np.asarray(self.segment)
        if alpha.shape != r1.shape or segment.shape != r1.shape:
            raise ValueError("alpha and segment must parallel the rate arrays")
        alpha.flags.writeable = False
        segment.flags.writeable = False
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "segment", segment)

    def __len__(self) -> int:
        return self.r1.size

    @property
    def points(self) -> list[RatePair]:
        return [RatePair(float(a), float(b)) for a, b in zip(self.r1, self.r2)]

    def interp_r2(self, r1: np.ndarray) -> np.ndarray:
        """r2 on the frontier at the given r1 values, linear between corners."""
        return np.interp(r1, self.r1, self.r2)


def pareto_filter(r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """Indices of the non-dominated upper-right corners, sorted by increasing r1.

    A point is kept iff no other point is >= in both coordinates (and > in
    at least one).  Ties in r1 keep the largest r2; ties in r2 keep the
    largest r1.
    """
    r1 = np.asarray(r1, dtype=np.float64)
    r2 = np.asarray(r2, dtype=np.float64)
    order = np.lexsort((-r2, -r1))  # r1 descending, then r2 descending
    keep = []
    best_r2 = -np.inf
    last_r1 = np.inf
    for idx in order:
        if r1[idx] == last_r1:
            continue  # dominated: same r1, smaller-or-equal r2
        last_r1 = r1[idx]
        if r2[idx] > best_r2:
            keep.append(idx)
            best_r2 = r2[idx]
    return np.array(keep[::-1], dtype=np.intp)


def threshold_alpha(fam: ParametricFamily, tol: Tolerance = DEFAULT_TOL) -> float:
    """Parameter value where f1 + f2 crosses c1 (unique by strict increase)."""
    if fam.c12 > fam.c1 - fam.c2 + _ENDPOINT_TOL:
        raise ValueError(
            f"requires C12 <= C1 - C2 (got C12={fam.c12}, C1-C2={fam.c1 - fam.c2})"
        )
    return bisect_monotone(
        lambda a: fam.f1(a) + fam.f2(a), 0.0, fam.b, fam.c1, "increasing", tol
    )


def r1_threshold(fam: ParametricFamily, tol: Tolerance = DEFAULT_TOL) -> float:
    """Largest r1 for which the region boundary is a proven capacity boundary."""
    return fam.f1(threshold_alpha(fam, tol))


def boundary_r2star(fam: ParametricFamily, r1: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Best r2 on the boundary at rate r1, i.e. f2 at the f1-preimage of r1.

    Only defined up to the threshold rate; beyond it the boundary is no
    longer proven and this function refuses to extrapolate.
    """
    r1_th = r1_threshold(fam, tol)
    if not -_ENDPOINT_TOL <= r1 <= r1_th + _ENDPOINT_TOL:
        raise ValueError(f"r1 must lie in [0, {r1_th}], got {r1}")
    r1 = min(max(r1, 0.0), fam.c1)
    alpha = bisect_monotone(fam.f1, 0.0, fam.b, r1, "increasing", tol)
    return fam.f2(alpha)


def _corner_sweep(fam: ParametricFamily, grid_size: int, sum_cut: bool) -> RateRegionBoundary:
    if grid_size < 2:
        raise ValueError(f"grid_size must be >= 2, got {grid_size}")
    alphas = np.linspace(0.0, fam.b, grid_size)
    f1s = np.array([fam.f1(a) for a in alphas])
    f2s = np.array([fam.f2(a) for a in alphas])
    r2s = np.minimum(f2s, fam.c1 - f1s) if sum_cut else f2s
    proven = f1s + f2s <= fam.c1 + _STRICT_SLACK
    keep = pareto_filter(f1s, r2s)
    segment = np.where(proven[keep], SEGMENT_PROVEN, SEGMENT_CONJECTURED)
    return RateRegionBoundary(f1s[keep], r2s[keep], alphas[keep], segment)


def inner_boundary(fam: ParametricFamily, grid_size: int = 2001) -> RateRegionBoundary:
    """Frontier of the union of sum-rate-cut rectangles over the parameter grid."""
    return _corner_sweep(fam, grid_size, sum_cut=True)


def outer_boundary(fam: ParametricFamily, grid_size: int = 2001) -> RateRegionBoundary:
    """Frontier of the union of plain rectangles over the parameter grid."""
    return _corner_sweep(fam, grid_size, sum_cut=False)


@dataclass(frozen=True)
class CoincidenceReport:
    """How far the inner and outer parametric slices agree below the threshold."""

    alpha_th: float
    max_violation: float
    first_divergence_alpha: Optional[float]


def coincidence_check(
    fam: ParametricFamily, grid_size: int = 2001, tol: Tolerance = DEFAULT_TOL
) -> CoincidenceReport:
    """Verify f1 + f2 <= c1 below the threshold and locate the first breach above it.

    Below the threshold the sum-rate cut is inactive, so the inner and outer
    slices are the same rectangle; ``max_violation`` reports how much (if at
    all) the sum exceeds c1 there.  ``first_divergence_alpha`` is the first
    grid parameter past the threshold where the cut strictly bites.
    """
    a_th = threshold_alpha(fam, tol)
    alphas = np.linspace(0.0, fam.b, grid_size)
    sums = np.array([fam.f1(a) + fam.f2(a) for a in alphas])
    below = alphas <= a_th
    max_violation = float(np.max(sums[below] - fam.c1, initial=0.0))
    above = (alphas > a_th) & (sums > fam.c1 + tol.abs_tol)
    first = float(alphas[above][0]) if np.any(above) else None
    return CoincidenceReport(a_th, max_violation, first)


def sweep_thresholds(
    fam_factory: Callable[[float], ParametricFamily],
    c12_grid,
    tol: Tolerance = DEFAULT_TOL,
) -> list[tuple[float, float, float]]:
    """Threshold parameter and threshold rate for each cooperation rate in the grid.

    Returns rows (c12, alpha_th, r1_th).  Both thresholds must be strictly
    decreasing along an increasing grid; a violation raises
    MonotonicityError since it signals a broken family, not bad input.
    """
    rows = []
    for c12 in c12_grid:
        fam = fam_factory(float(c12))
        a_th = threshold_alpha(fam, tol)
        rows.append((float(c12), a_th, fam.f1(a_th)))
    c12s = [r[0] for r in rows]
    if any(b <= a for a, b in zip(c12s, c12s[1:])):
        raise ValueError("c12 grid must be strictly increasing")
    for col, name in ((1, "alpha_th"), (2, "r1_th")):
        vals = [r[col] for r in rows]
        if any(b >= a for a, b in zip(vals, vals[1:])):
            raise MonotonicityError(f"{name} is not strictly decreasing along the c12 grid")
    return rows


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def boundary_to_csv(boundary: RateRegionBoundary) -> str:
    """CSV frontier export: header alpha,r1,r2,segment, LF endings, 12 digits."""
    lines = ["alpha,r1,r2,segment"]
    for a, r1, r2, seg in zip(boundary.alpha, boundary.r1, boundary.r2, boundary.segment):
        lines.append(f"{_fmt(a)},{_fmt(r1)},{_fmt(r2)},{seg}")
    return "\n".join(lines) + "\n"


def boundary_from_csv(text: str) -> RateRegionBoundary:
    lines = [ln for ln in text.split("\n") if ln]
    if lines[0] != "alpha,r1,r2,segment":
        raise ValueError(f"unexpected frontier CSV header: {lines[0]!r}")
    cols = [ln.split(",") for ln in lines[1:]]
    return RateRegionBoundary(
        np.array([float(c[1]) for c in cols]),
        np.array([float(c[2]) for c in cols]),
        np.array([float(c[0]) for c in cols]),
        np.array([c[3] for c in cols]),
    )


def boundary_to_json(boundary: RateRegionBoundary) -> str:
    points = [
        {
            "alpha": float(_fmt(a)),
            "r1": float(_fmt(r1)),
            "r2": float(_fmt(r2)),
            "segment": str(seg),
        }
        for a, r1, r2, seg in zip(boundary.alpha, boundary.r1, boundary.r2, boundary.segment)
    ]
    return json.dumps({"points": points}, indent=2) + "\n"


def boundary_from_json(text: str) -> RateRegionBoundary:
    pts = json.loads(text)["points"]
    return RateRegionBoundary(
        np.array([p["r1"] for p in pts]),
        np.array([p["r2"] for p in pts]),
        np.array([p["alpha"] for p in pts]),
        np.array([p["segment"] for p in pts]),
    )


def thresholds_to_csv(rows: list[tuple[float, float, float]], c1: float) -> str:
    """CSV threshold-sweep export with the diamond-point r2 column."""
    lines = ["c12,alpha_th,r1_th,r2_at_th"]
    for c12, a_th, r1_th in rows:
        lines.append(f"{_fmt(c12)},{_fmt(a_th)},{_fmt(r1_th)},{_fmt(c1 - r1_th)}")
    return "\n".join(lines) + "\n"

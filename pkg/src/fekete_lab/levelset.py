"""Level-set measure estimation and boundedness evidence on boxes.

For a componentwise subadditive f and anchor t with positive
coordinates, the set of points below t where f stays above f(t)/2^d
fills at least a 2^-d fraction of the box: splitting each axis at x_i
versus t_i - x_i partitions the box into 2^d measure-preserving copies,
and subadditivity forces one of the 2^d mixed values to carry its share
of f(t).  The estimators here check that inequality numerically.

Measurability of f is assumed, not checked: f is treated as exactly
evaluable pointwise, and the measure estimates are ordinary quadrature
(center rule with a corner-disagreement error bound) or Monte Carlo
(Hoeffding bound at 99% confidence).  A box scan is evidence of
boundedness, never proof, and says so in its output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .domain import DomainError, Point, as_point
from .registry import FunctionOracle, rubin_eval
from .sampling import unit_uniform
from .checks import violation_tolerance

__all__ = [
    "LevelSetSpec",
    "MeasureEstimate",
    "BoxScan",
    "LemmaCheckRow",
    "levelset_measure",
    "check_levelset_lemma",
    "compact_bound_scan",
    "LineScan",
    "UnboundednessDemo",
    "rubin_unboundedness_demo",
    "RationalBoxScan",
    "rubin_rational_box_scan",
]

_MC_CONFIDENCE_ALPHA = 0.01  # 99% Hoeffding bound


@dataclass(frozen=True)
class LevelSetSpec:
    """The set V = {x : 0 < x_i < t_i for all i, f(x) >= k}."""

    t: Point
    k: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", as_point(self.t))
        if not all(c > 0 for c in self.t):
            raise DomainError("anchor must have positive coordinates")

    @property
    def box_volume(self) -> float:
        return self.t.product()


@dataclass(frozen=True)
class MeasureEstimate:
    value: float
    method: str          # "grid_quadrature" or "monte_carlo"
    detail: dict
    error_bound: float


@dataclass(frozen=True)
class BoxScan:
    """Observed extrema of f over a finite evaluation grid on a box.

    A scan is evidence of boundedness on the box, never proof: values
    between grid points are not constrained by it.
    """

    box: tuple[tuple[float, float], ...]
    resolution: int
    minimum: float
    maximum: float
    argmin: tuple[float, ...]
    argmax: tuple[float, ...]
    note: str = "grid scan: evidence of boundedness, not proof"

    def to_json_dict(self) -> dict:
        return {
            "box": [list(b) for b in self.box],
            "resolution": self.resolution,
            "min": self.minimum,
            "max": self.maximum,
            "argmin": list(self.argmin),
            "argmax": list(self.argmax),
            "note": self.note,
        }


def _require_real_domain(oracle: FunctionOracle) -> None:
    if oracle.domain.integer or oracle.domain.grid_axes is not None:
        raise DomainError("measure estimation needs an oracle on a real domain")


def _grid_quadrature(oracle: FunctionOracle, spec: LevelSetSpec, cells: int) -> MeasureEstimate:
    t = spec.t
    d = t.dim
    cell_vol = spec.box_volume / cells ** d

    center_axes = [(np.arange(cells) + 0.5) * (t[i] / cells) for i in range(d)]
    inside_centers = oracle.evaluate_mesh(center_axes) >= spec.k
    value = float(inside_centers.sum()) * cell_vol

    # Corner grid: the open box excludes 0, so nudge the zero corner inward.
    corner_axes = []
    for i in range(d):
        ax = np.arange(cells + 1) * (t[i] / cells)
        ax[0] = t[i] / cells * 1e-9
        corner_axes.append(ax)
    inside_corners = oracle.evaluate_mesh(corner_axes) >= spec.k

    ref = inside_corners[tuple(slice(0, cells) for _ in range(d))]
    agree = np.ones(ref.shape, dtype=bool)
    for offsets in np.ndindex(*(2,) * d):
        if not any(offsets):
            continue
        sl = tuple(slice(o, cells + o) for o in offsets)
        agree &= inside_corners[sl] == ref
    error = float((~agree).sum()) * cell_vol

    return MeasureEstimate(value=value, method="grid_quadrature",
                           detail={"cells_per_axis": cells}, error_bound=error)


def _monte_carlo(oracle: FunctionOracle, spec: LevelSetSpec,
                 samples: int, seed: int) -> MeasureEstimate:
    t = spec.t
    d = t.dim
    columns = [
        np.array([unit_uniform(seed, j * d + i) * t[i] for j in range(samples)])
        for i in range(d)
    ]
    values = oracle.evaluate_points(columns)
    hits = int(np.count_nonzero(values >= spec.k))
    vol = spec.box_volume
    value = vol * hits / samples
    error = vol * math.sqrt(math.log(2.0 / _MC_CONFIDENCE_ALPHA) / (2.0 * samples))
    return MeasureEstimate(value=value, method="monte_carlo",
                           detail={"samples": samples, "seed": seed,
                                   "confidence": 1.0 - _MC_CONFIDENCE_ALPHA},
                           error_bound=error)


def levelset_measure(oracle: FunctionOracle, spec: LevelSetSpec,
                     method: str = "grid", *, cells: int = 400,
                     samples: int = 20_000, seed: int = 2024) -> MeasureEstimate:
    """Estimate the Lebesgue measure of the level set V with a stated error bound.

    Grid quadrature counts a cell as inside iff its center is; the error
    bound is the total volume of cells whose corner verdicts disagree,
    which covers every cell the boundary can cross.  Monte Carlo uses
    the deterministic counter stream and a Hoeffding bound.
    """
    _require_real_domain(oracle)
    if method == "grid":
        if cells < 2:
            raise DomainError("need at least 2 cells per axis")
        return _grid_quadrature(oracle, spec, cells)
    if method == "mc":
        if samples < 100:
            raise DomainError("need at least 100 Monte Carlo samples")
        return _monte_carlo(oracle, spec, samples, seed)
    raise DomainError(f"unknown method {method!r}; use 'grid' or 'mc'")


@dataclass(frozen=True)
class LemmaCheckRow:
    anchor: tuple[float, ...]
    k: float
    estimate: MeasureEstimate
    bound: float
    margin: float
    holds: bool

    def to_json_dict(self) -> dict:
        return {
            "anchor": list(self.anchor),
            "k": self.k,
            "mu_estimate": self.estimate.value,
            "method": self.estimate.method,
            "error": self.estimate.error_bound,
            "bound": self.bound,
            "margin": self.margin,
            "holds": self.holds,
        }


def check_levelset_lemma(oracle: FunctionOracle, anchors: Iterable[Point | Sequence[float]],
                         method: str = "grid", *, cells: int = 400,
                         samples: int = 20_000, seed: int = 2024) -> list[LemmaCheckRow]:
    """At each anchor t, test mu{x < t : f(x) >= f(t)/2^d} >= prod(t)/2^d.

    The margin is the raw estimate minus the bound; "holds" allows the
    stated estimation error, since the inequality can be attained with
    equality (|x| does exactly that at every anchor).
    """
    rows: list[LemmaCheckRow] = []
    for anchor in anchors:
        t = as_point(anchor)
        d = t.dim
        k = oracle.evaluate(t) / 2 ** d
        spec = LevelSetSpec(t=t, k=k)
        est = levelset_measure(oracle, spec, method, cells=cells,
                               samples=samples, seed=seed)
        bound = spec.box_volume / 2 ** d
        margin = est.value - bound
        holds = est.value + est.error_bound >= bound - violation_tolerance(est.value, bound)
        rows.append(LemmaCheckRow(anchor=tuple(t), k=k, estimate=est,
                                  bound=bound, margin=margin, holds=holds))
    return rows


def compact_bound_scan(oracle: FunctionOracle,
                       box: Sequence[tuple[float, float]],
                       resolution: int = 200) -> BoxScan:
    """Scan f over a closed box grid, recording extrema and their witnesses."""
    _require_real_domain(oracle)
    if resolution < 2:
        raise DomainError("need at least 2 grid points per axis")
    box = tuple((float(a), float(b)) for a, b in box)
    if len(box) != oracle.domain.dim:
        raise DomainError(f"box of dimension {len(box)} vs oracle {oracle.domain.dim}")
    for a, b in box:
        if not a <= b:
            raise DomainError(f"degenerate interval [{a!r}, {b!r}]")
    axes = [np.linspace(a, b, resolution) for a, b in box]
    values = oracle.evaluate_mesh(axes)
    flat_min = int(np.argmin(values))
    flat_max = int(np.argmax(values))
    idx_min = np.unravel_index(flat_min, values.shape)
    idx_max = np.unravel_index(flat_max, values.shape)
    return BoxScan(
        box=box,
        resolution=resolution,
        minimum=float(values[idx_min]),
        maximum=float(values[idx_max]),
        argmin=tuple(float(axes[i][idx_min[i]]) for i in range(len(box))),
        argmax=tuple(float(axes[i][idx_max[i]]) for i in range(len(box))),
    )


# ---------------------------------------------------------------------------
# The minimum-denominator function: bounded on every line, unbounded on the box
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LineScan:
    x: Fraction
    denominator_bound: int
    max_value: int
    ok: bool


@dataclass(frozen=True)
class UnboundednessDemo:
    """Exact-rational witnesses that per-line boundedness does not bound the box.

    diagonal holds ((1 + 1/n, 1 + 1/n), n) pairs: the function value
    grows without bound inside [1, 2]^2.  line_scans fix the first
    coordinate at a rational x and confirm every sampled value on that
    line stays at or below denominator(x).
    """

    diagonal: tuple[tuple[tuple[Fraction, Fraction], int], ...]
    line_scans: tuple[LineScan, ...]

    @property
    def ok(self) -> bool:
        diag_ok = all(value == point[0].denominator for point, value in self.diagonal)
        return diag_ok and all(scan.ok for scan in self.line_scans)


def _rational_grid(q_max: int) -> list[Fraction]:
    """All rationals 1 + p/q with 1 <= q <= q_max, 0 <= p <= q, deduplicated."""
    grid = {Fraction(1)}
    for q in range(1, q_max + 1):
        for p in range(0, q + 1):
            grid.add(1 + Fraction(p, q))
    return sorted(grid)


def rubin_unboundedness_demo(n_max: int, *, line_points: int = 20,
                             line_grid_q: int = 12) -> UnboundednessDemo:
    """Evaluate the minimum-denominator function exactly along the diagonal.

    At (1 + 1/n, 1 + 1/n) the value is exactly n, because n + 1 and n
    are coprime.  Floating point grids almost never hit high-denominator
    rationals, so the demo works in exact integer arithmetic throughout.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    diagonal = []
    for n in range(1, n_max + 1):
        x = 1 + Fraction(1, n)
        value = int(rubin_eval((x, x)))
        diagonal.append(((x, x), value))

    ys = _rational_grid(line_grid_q)
    line_scans = []
    for m in range(1, line_points + 1):
        x = 1 + Fraction(1, m)
        bound = x.denominator
        max_value = max(min(x.denominator, y.denominator) for y in ys)
        line_scans.append(LineScan(x=x, denominator_bound=bound,
                                   max_value=max_value, ok=max_value <= bound))
    return UnboundednessDemo(diagonal=tuple(diagonal), line_scans=tuple(line_scans))


@dataclass(frozen=True)
class RationalBoxScan:
    """Extrema of the minimum-denominator function over the exact grid on [1, 2]^2."""

    q_max: int
    grid_size: int
    minimum: int
    maximum: int
    argmax: tuple[Fraction, Fraction]

    def to_json_dict(self) -> dict:
        return {
            "q_max": self.q_max,
            "grid_size": self.grid_size,
            "min": self.minimum,
            "max": self.maximum,
            "argmax": [str(c) for c in self.argmax],
        }


def rubin_rational_box_scan(q_max: int) -> RationalBoxScan:
    """Scan min(denominator, denominator) over {1 + p/q : q <= q_max}^2.

    The maximum grows without bound in q_max (it is at least q_max,
    attained on the diagonal), which is exactly what a float grid scan
    would silently miss.
    """
    if q_max < 1:
        raise DomainError("q_max must be >= 1")
    grid = _rational_grid(q_max)
    best = -1
    best_point: tuple[Fraction, Fraction] | None = None
    worst = None
    for x in grid:
        for y in grid:
            v = min(x.denominator, y.denominator)
            if v > best:
                best, best_point = v, (x, y)
            if worst is None or v < worst:
                worst = v
    assert best_point is not None and worst is not None
    return RationalBoxScan(q_max=q_max, grid_size=len(grid) ** 2,
                           minimum=worst, maximum=best, argmax=best_point)

"""Empirical brackets for directed limits of the ratio net f(x)/prod(x).

For a componentwise subadditive f on the main orthant the ratio net
converges to its infimum, so the minimum of the evaluated ratios is a
true upper bound for the limit -- that is the one certified quantity
here.  "Converged" statuses are always empirical: they say the sampled
tail of a cofinal subset stabilized within delta, not that every point
beyond the threshold does.

Statuses: converged | diverging_to_minus_infinity |
diverging_to_plus_infinity | inconclusive.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .checks import Violation, ViolationReport, violation_tolerance
from .domain import (
    DimensionMismatchError,
    DomainError,
    EvaluationError,
    FeketeLabError,
    GridSchedule,
    Orthant,
    Point,
    as_extended,
    as_point,
    default_schedule,
    ext_sum,
    qr_decompose,
)
from .registry import Domain, FunctionOracle

__all__ = [
    "RatioSample",
    "LimitBracket",
    "simultaneous_limit",
    "IteratedLimit",
    "LevelSummary",
    "iterated_limit",
    "diagonal_limit",
    "multiple_inf",
    "DecompositionTerm",
    "DecompositionBound",
    "verify_decomposition_bound",
    "orthant_limit",
    "ray_limit",
    "InnerLimitProfile",
    "inner_limit_profile",
]

CONVERGED = "converged"
DIVERGING_MINUS = "diverging_to_minus_infinity"
DIVERGING_PLUS = "diverging_to_plus_infinity"
INCONCLUSIVE = "inconclusive"

# -inf detection is inherently heuristic; these are defaults, not constants.
DEFAULT_DIVERGENCE_FLOOR = -1e12
_STATUS_RANK = {CONVERGED: 0, DIVERGING_PLUS: 1, DIVERGING_MINUS: 1, INCONCLUSIVE: 2}


@dataclass(frozen=True)
class RatioSample:
    shell: int
    point: tuple[float, ...]
    ratio: float


@dataclass(frozen=True)
class LimitBracket:
    """One-sided bracket for a ratio-net limit.

    In inf sense, best_upper is the minimum evaluated ratio and bounds
    the limit from above (certified when the oracle really is
    componentwise subadditive).  In sup sense (odd orthants) the
    bracket flips: best_lower is the maximum ratio and bounds the limit
    from below.  tail_estimate is the extreme ratio over the outermost
    schedule shell.
    """

    sense: str
    best_upper: float | None
    best_lower: float | None
    tail_estimate: float
    status: str
    delta: float
    shell: int | None
    threshold_point: tuple[float, ...] | None
    evaluations: int
    samples: tuple[RatioSample, ...] = field(default=(), repr=False)

    @property
    def best_bound(self) -> float:
        bound = self.best_upper if self.sense == "inf" else self.best_lower
        assert bound is not None
        return bound

    def running_bound_by_shell(self) -> list[tuple[int, float]]:
        """Running best bound after each shell, nonincreasing in inf sense."""
        fold = min if self.sense == "inf" else max
        by_shell: dict[int, list[float]] = {}
        for s in self.samples:
            by_shell.setdefault(s.shell, []).append(s.ratio)
        out: list[tuple[int, float]] = []
        current: float | None = None
        for shell in sorted(by_shell):
            extreme = fold(by_shell[shell])
            current = extreme if current is None else fold(current, extreme)
            out.append((shell, current))
        return out

    def to_json_dict(self) -> dict:
        return {
            "sense": self.sense,
            "best_upper": self.best_upper,
            "best_lower": self.best_lower,
            "tail_estimate": self.tail_estimate,
            "status": self.status,
            "delta": self.delta,
            "shell": self.shell,
            "R": list(self.threshold_point) if self.threshold_point else None,
            "evaluations": self.evaluations,
        }

    def samples_csv_rows(self) -> list[list[str]]:
        dim = len(self.samples[0].point) if self.samples else 0
        header = ["shell"] + [f"x{i + 1}" for i in range(dim)] + ["ratio"]
        rows = [header]
        for s in sorted(self.samples, key=lambda s: (s.shell, s.point)):
            rows.append([str(s.shell)] + [repr(c) for c in s.point] + [repr(s.ratio)])
        return rows


# ---------------------------------------------------------------------------
# Simultaneous (product-order) limit
# ---------------------------------------------------------------------------

def _require_main_orthant(oracle: FunctionOracle) -> None:
    w = oracle.domain.orthant
    if w is not None and not w.is_main:
        raise DomainError(
            f"{oracle.name!r} lives on orthant {w}; use orthant_limit for reflected brackets"
        )
    if oracle.domain.grid_axes is not None:
        raise DomainError("limit estimation needs an unbounded domain, not a finite grid")


def simultaneous_limit(oracle: FunctionOracle, schedule: GridSchedule | None = None,
                       delta: float = 0.01, *,
                       divergence_floor: float = DEFAULT_DIVERGENCE_FLOOR) -> LimitBracket:
    """Bracket the product-order limit of f(x)/prod(x) on the main orthant.

    Evaluates the full schedule grid.  Shell k is the layer of grid
    points whose largest level index is k, so extending the schedule
    only adds shells and the running minimum is nonincreasing.  The
    bracket converges at the smallest shell k such that every evaluated
    ratio at points beyond the shell corner (product order) lies within
    delta of the minimum.
    """
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    _require_main_orthant(oracle)
    d = oracle.domain.dim
    schedule = schedule or default_schedule(d)
    if schedule.dim != d:
        raise DimensionMismatchError(f"schedule of dimension {schedule.dim} vs oracle {d}")

    integer = oracle.domain.integer
    axes = [np.asarray(schedule.axis_values(i, integer=integer), dtype=float)
            for i in range(d)]
    levels = len(axes[0])

    values = oracle.evaluate_mesh(axes)
    denom = np.ones_like(values)
    for i, ax in enumerate(axes):
        shape = [1] * d
        shape[i] = levels
        denom = denom * ax.reshape(shape)
    ratios = values / denom

    idx = np.indices(ratios.shape)
    shell_of = np.maximum.reduce(idx, axis=0)

    best_upper = float(ratios.min())
    tail_estimate = float(ratios[shell_of == levels - 1].min())

    # suffix max over the product-order upper sets [k..L]^d
    suffix_max = ratios.copy()
    for a in range(d):
        suffix_max = np.flip(np.maximum.accumulate(np.flip(suffix_max, axis=a), axis=a), axis=a)

    shell: int | None = None
    threshold: tuple[float, ...] | None = None
    for k in range(levels):
        corner = tuple([k] * d)
        if suffix_max[corner] - best_upper <= delta:
            shell = k
            threshold = tuple(float(ax[k]) for ax in axes)
            break

    if best_upper == -math.inf or tail_estimate < divergence_floor:
        status = DIVERGING_MINUS
    elif shell is not None:
        status = CONVERGED
    else:
        status = INCONCLUSIVE

    samples = tuple(
        RatioSample(
            shell=int(shell_of[ix]),
            point=tuple(float(axes[i][ix[i]]) for i in range(d)),
            ratio=float(ratios[ix]),
        )
        for ix in np.ndindex(*ratios.shape)
    )
    return LimitBracket(sense="inf", best_upper=best_upper, best_lower=None,
                        tail_estimate=tail_estimate, status=status, delta=delta,
                        shell=shell, threshold_point=threshold,
                        evaluations=int(ratios.size), samples=samples)


# ---------------------------------------------------------------------------
# Adaptive one-dimensional tail estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _TailEstimate:
    value: float
    status: str
    evaluations: int
    stabilized_at: float | None


def _adaptive_tail(g: Callable[[float], float], *, base: float, growth: float,
                   tol: float, integer: bool, min_steps: int = 8, max_steps: int = 200,
                   divergence_floor: float = DEFAULT_DIVERGENCE_FLOOR,
                   stable_steps: int = 3, growth_window: int = 8,
                   growth_trigger: float = 4.0) -> _TailEstimate:
    """Estimate the limit of g along a geometric ladder, extending adaptively.

    Stops when the tail stabilizes (consecutive differences within tol),
    when sustained geometric growth marks divergence to +inf, when the
    tail crosses the divergence floor, or at the step cap (inconclusive).
    The returned value is the running minimum, the certified-style upper
    estimate when g is a ratio of a subadditive function.
    """
    samples: list[float] = []
    stable_run = 0
    evals = 0
    for k in range(max_steps + 1):
        x = base * growth ** k
        if integer:
            x = float(int(round(x)))
        if not math.isfinite(x) or x > 1e300:
            break
        v = as_extended(g(x))
        evals += 1
        if v == -math.inf:
            return _TailEstimate(-math.inf, DIVERGING_MINUS, evals, None)
        if v == math.inf:
            return _TailEstimate(math.inf, DIVERGING_PLUS, evals, None)
        if samples and abs(v - samples[-1]) <= tol:
            stable_run += 1
        elif samples:
            stable_run = 0
        samples.append(v)
        if len(samples) >= min_steps and stable_run >= stable_steps:
            return _TailEstimate(min(samples), CONVERGED, evals, x)
        if v < divergence_floor:
            return _TailEstimate(-math.inf, DIVERGING_MINUS, evals, None)
        if v > -divergence_floor and len(samples) >= 2 and v > samples[-2]:
            return _TailEstimate(math.inf, DIVERGING_PLUS, evals, None)
        if len(samples) >= max(growth_window, min_steps):
            window = samples[-growth_window:]
            increasing = all(a < b for a, b in zip(window, window[1:]))
            if increasing and window[0] > 0 and window[-1] >= growth_trigger * window[0]:
                return _TailEstimate(math.inf, DIVERGING_PLUS, evals, None)
    if not samples:
        raise EvaluationError("empty ladder: schedule overflowed immediately")
    return _TailEstimate(min(samples), INCONCLUSIVE, evals, None)


# ---------------------------------------------------------------------------
# Iterated (nested one-variable) limits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelSummary:
    axis: int
    status: str
    tol: float
    sweeps: int
    evaluations: int
    # coordinate where the most recent sweep at this depth stabilized,
    # None if it never converged
    last_stabilized_at: float | None = None


@dataclass(frozen=True)
class IteratedLimit:
    value: float
    status: str
    order: tuple[int, ...]
    levels: tuple[LevelSummary, ...]
    evaluations: int

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "status": self.status,
            "order": list(self.order),
            "levels": [
                {"axis": l.axis, "status": l.status, "tol": l.tol,
                 "sweeps": l.sweeps, "evaluations": l.evaluations,
                 "stabilized_at": l.last_stabilized_at}
                for l in self.levels
            ],
            "evaluations": self.evaluations,
        }


def _worst_status(statuses: Sequence[str]) -> str:
    return max(statuses, key=lambda s: _STATUS_RANK[s])


def iterated_limit(oracle: FunctionOracle, order: Sequence[int],
                   schedule: GridSchedule | None = None, delta: float = 0.01, *,
                   max_steps: int = 200,
                   divergence_floor: float = DEFAULT_DIVERGENCE_FLOOR) -> IteratedLimit:
    """Nested one-variable limits of f(x)/prod(x) in the given axis order.

    order[0] is the outermost limit variable and order[-1] the
    innermost.  Each level runs the adaptive 1-D estimator; inner sweeps
    extend their ladder until the tail stabilizes, because a fixed inner
    depth leaks outer-coordinate scale into the inner estimate.  Inner
    divergence propagates as +-inf values, not as an error.  Level
    tolerances halve with depth so the compounded error stays near
    delta; the result carries the worst level status.
    """
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    _require_main_orthant(oracle)
    d = oracle.domain.dim
    if sorted(order) != list(range(d)):
        raise DomainError(f"order {order!r} is not a permutation of the {d} axes")
    schedule = schedule or default_schedule(d)
    integer = oracle.domain.integer

    statuses: list[list[str]] = [[] for _ in range(d)]
    sweeps = [0] * d
    level_evals = [0] * d
    stabilized: list[float | None] = [None] * d
    total_evals = 0

    def run_level(depth: int, assigned: dict[int, float]) -> _TailEstimate:
        axis = order[depth]
        tol = delta * 2.0 ** -(depth + 1)

        def g(x: float) -> float:
            nonlocal total_evals
            here = dict(assigned)
            here[axis] = x
            if depth == d - 1:
                point = Point(tuple(here[i] for i in range(d)))
                total_evals += 1
                level_evals[depth] += 1
                value = oracle.evaluate(point)
                return value / point.product()
            inner = run_level(depth + 1, here)
            return inner.value

        est = _adaptive_tail(g, base=schedule.base[axis], growth=schedule.growth,
                             tol=tol, integer=integer, max_steps=max_steps,
                             divergence_floor=divergence_floor)
        statuses[depth].append(est.status)
        sweeps[depth] += 1
        if est.stabilized_at is not None:
            stabilized[depth] = est.stabilized_at
        if depth < d - 1:
            level_evals[depth] += est.evaluations
        return est

    top = run_level(0, {})
    levels = tuple(
        LevelSummary(axis=order[depth], status=_worst_status(statuses[depth]),
                     tol=delta * 2.0 ** -(depth + 1), sweeps=sweeps[depth],
                     evaluations=level_evals[depth],
                     last_stabilized_at=stabilized[depth])
        for depth in range(d)
    )
    overall = _worst_status([top.status] + [l.status for l in levels])
    return IteratedLimit(value=top.value, status=overall, order=tuple(order),
                         levels=levels, evaluations=total_evals)


# ---------------------------------------------------------------------------
# Diagonal / path limits
# ---------------------------------------------------------------------------

def _bracket_from_path(points: list[tuple[float, ...]], ratios: list[float],
                       params: list[float], delta: float,
                       divergence_floor: float) -> LimitBracket:
    best_upper = min(ratios)
    tail_estimate = ratios[-1]
    shell: int | None = None
    threshold: tuple[float, ...] | None = None
    for k in range(len(ratios)):
        if max(ratios[k:]) - best_upper <= delta:
            shell = k
            threshold = (params[k],)
            break
    if best_upper == -math.inf or tail_estimate < divergence_floor:
        status = DIVERGING_MINUS
    elif shell is not None:
        status = CONVERGED
    else:
        status = INCONCLUSIVE
    samples = tuple(RatioSample(shell=k, point=points[k], ratio=ratios[k])
                    for k in range(len(ratios)))
    return LimitBracket(sense="inf", best_upper=best_upper, best_lower=None,
                        tail_estimate=tail_estimate, status=status, delta=delta,
                        shell=shell, threshold_point=threshold,
                        evaluations=len(ratios), samples=samples)


def diagonal_limit(oracle: FunctionOracle, paths: Sequence[Callable[[float], float]],
                   schedule: GridSchedule | None = None,
                   delta: float = 0.01, *,
                   divergence_floor: float = DEFAULT_DIVERGENCE_FLOOR) -> LimitBracket:
    """Bracket the limit along a parametrized path x(t) with every axis diverging.

    Any such path is a subnet of the product-order net, so for a
    componentwise subadditive oracle the path limit equals the
    simultaneous one and its sampled infimum already equals the global
    infimum on identity-style integer diagonals.
    """
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    _require_main_orthant(oracle)
    d = oracle.domain.dim
    if len(paths) != d:
        raise DimensionMismatchError(f"{len(paths)} paths for {d} axes")
    schedule = schedule or GridSchedule(base=Point((1.0,)), growth=2.0, levels=40)
    if schedule.dim != 1:
        raise DomainError("diagonal limits use a one-dimensional parameter schedule")
    ts = schedule.axis_values(0)

    first = [float(p(ts[0])) for p in paths]
    last = [float(p(ts[-1])) for p in paths]
    escape = schedule.growth ** (schedule.levels / 2)
    for i in range(d):
        if not last[i] > first[i] * escape:
            raise DomainError(
                f"path {i} does not diverge over the sampled range "
                f"({first[i]!r} -> {last[i]!r}); need growth beyond factor {escape!r}"
            )

    integer = oracle.domain.integer
    points: list[tuple[float, ...]] = []
    ratios: list[float] = []
    for t in ts:
        coords = tuple(float(round(p(t))) if integer else float(p(t)) for p in paths)
        value = oracle.evaluate(coords)
        points.append(coords)
        ratios.append(value / math.prod(coords))
    return _bracket_from_path(points, ratios, list(map(float, ts)), delta, divergence_floor)


# ---------------------------------------------------------------------------
# Nested infima commute
# ---------------------------------------------------------------------------

def multiple_inf(values: np.ndarray | Sequence, order: Sequence[int]) -> float:
    """Nested minimum along the axes in the given order; equals the flat minimum.

    The equality is asserted, not assumed: a disagreement would be a
    bookkeeping bug, and finite minima commute no matter the order.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise DomainError("empty grid has no minimum")
    if np.isnan(arr).any():
        raise EvaluationError("grid contains NaN")
    d = arr.ndim
    if sorted(order) != list(range(d)):
        raise DomainError(f"order {order!r} is not a permutation of the {d} axes")
    out = arr
    remaining = list(range(d))
    for axis in reversed(list(order)):  # innermost reduction first
        pos = remaining.index(axis)
        out = out.min(axis=pos)
        remaining.pop(pos)
    nested = float(out)
    flat = float(arr.min())
    if nested != flat:
        raise FeketeLabError(f"nested minimum {nested!r} disagrees with flat minimum {flat!r}")
    return nested


# ---------------------------------------------------------------------------
# The step-decomposition upper bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionTerm:
    bits: tuple[int, ...]
    coefficient: int
    point: tuple[float, ...]
    value: float

    @property
    def contribution(self) -> float:
        return self.coefficient * self.value


@dataclass(frozen=True)
class DecompositionBound:
    x: tuple[float, ...]
    t: tuple[float, ...]
    lhs: float
    rhs: float
    holds: bool
    terms: tuple[DecompositionTerm, ...]

    def to_json_dict(self) -> dict:
        return {
            "x": list(self.x), "t": list(self.t),
            "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds,
            "terms": [
                {"bits": list(term.bits), "coefficient": term.coefficient,
                 "point": list(term.point), "value": term.value}
                for term in self.terms
            ],
        }


def verify_decomposition_bound(oracle: FunctionOracle,
                               x: Point | Sequence[float],
                               t: Point | Sequence[float]) -> DecompositionBound:
    """Check f(x) against the 2^d-term bound from the q*t + r decomposition.

    Write x_i = q_i t_i + r_i with r_i in [t_i, 2 t_i).  Repeated
    per-axis subadditivity gives

        f(x) <= sum over sign words w of (prod q_i^{w_i}) * f(y^w),

    where y^w takes t_i on axes with w_i = 1 and r_i otherwise.  For a
    componentwise subadditive oracle the verdict must be "holds"; a
    failure is a counterexample to the claim.
    """
    px, pt = as_point(x), as_point(t)
    d = oracle.domain.dim
    if px.dim != d or pt.dim != d:
        raise DimensionMismatchError(f"points of dimension {px.dim}/{pt.dim} vs oracle {d}")
    for i in range(d):
        if not px[i] >= 2 * pt[i]:
            raise DomainError(f"need x_i >= 2 t_i on every axis; axis {i} has "
                              f"x={px[i]!r}, t={pt[i]!r}")
    decomp = [qr_decompose(px[i], pt[i]) for i in range(d)]

    terms: list[DecompositionTerm] = []
    for bits in itertools.product((0, 1), repeat=d):
        coeff = math.prod(decomp[i].q if bits[i] else 1 for i in range(d))
        point = tuple(decomp[i].t if bits[i] else decomp[i].r for i in range(d))
        value = oracle.evaluate(point)
        terms.append(DecompositionTerm(bits=bits, coefficient=coeff,
                                       point=point, value=value))
    rhs = ext_sum(term.contribution for term in terms)
    lhs = oracle.evaluate(px)
    holds = lhs <= rhs + violation_tolerance(lhs, rhs)
    return DecompositionBound(x=tuple(px), t=tuple(pt), lhs=lhs, rhs=rhs,
                              holds=holds, terms=tuple(terms))


# ---------------------------------------------------------------------------
# Limits on general orthants
# ---------------------------------------------------------------------------

def orthant_limit(oracle: FunctionOracle, orthant: Orthant | None = None,
                  schedule: GridSchedule | None = None, delta: float = 0.01, *,
                  divergence_floor: float = DEFAULT_DIVERGENCE_FLOOR) -> LimitBracket:
    """Bracket the ratio-net limit on an arbitrary orthant via reflection.

    Reflecting the orthant onto the main one preserves componentwise
    subadditivity.  With evenly many reversed axes the coordinate
    product is unchanged and the limit is the infimum (inf-sense upper
    bracket); with oddly many the product flips sign, the limit is the
    supremum, and the bracket flips to a sup-sense lower bound.
    """
    w = orthant or oracle.domain.orthant
    if w is None:
        raise DomainError("specify the orthant to estimate on (oracle is defined everywhere)")
    d = oracle.domain.dim
    if w.dim != d:
        raise DimensionMismatchError(f"orthant word of length {w.dim} vs oracle {d}")

    signs = tuple(w.sign(i) for i in range(d))

    def reflected(p: Point) -> float:
        return oracle.evaluate(tuple(c * s for c, s in zip(p, signs)))

    mirror = FunctionOracle(
        name=f"{oracle.name}_on_{w}",
        domain=Domain(dim=d, orthant=Orthant.main(d), integer=oracle.domain.integer),
        fn=reflected,
        claims_componentwise_subadditive=oracle.claims_componentwise_subadditive,
    )
    base = simultaneous_limit(mirror, schedule, delta, divergence_floor=divergence_floor)

    def reflect_back(point: tuple[float, ...]) -> tuple[float, ...]:
        return tuple(c * s for c, s in zip(point, signs))

    if w.parity == 0:
        samples = tuple(RatioSample(s.shell, reflect_back(s.point), s.ratio)
                        for s in base.samples)
        threshold = reflect_back(base.threshold_point) if base.threshold_point else None
        return LimitBracket(sense="inf", best_upper=base.best_upper, best_lower=None,
                            tail_estimate=base.tail_estimate, status=base.status,
                            delta=delta, shell=base.shell, threshold_point=threshold,
                            evaluations=base.evaluations, samples=samples)

    status = {DIVERGING_MINUS: DIVERGING_PLUS}.get(base.status, base.status)
    samples = tuple(RatioSample(s.shell, reflect_back(s.point), -s.ratio)
                    for s in base.samples)
    threshold = reflect_back(base.threshold_point) if base.threshold_point else None
    assert base.best_upper is not None
    return LimitBracket(sense="sup", best_upper=None, best_lower=-base.best_upper,
                        tail_estimate=-base.tail_estimate, status=status,
                        delta=delta, shell=base.shell, threshold_point=threshold,
                        evaluations=base.evaluations, samples=samples)


def ray_limit(oracle: FunctionOracle, direction: Point | Sequence[float],
              schedule: GridSchedule | None = None, delta: float = 0.01, *,
              divergence_floor: float = DEFAULT_DIVERGENCE_FLOOR) -> LimitBracket:
    """One-dimensional bracket for f(t * direction)/t as t grows.

    For a jointly subadditive f the restriction g(t) = f(t * direction)
    is subadditive in t, so g(t)/t converges to its infimum and the
    usual bracket semantics apply along the ray.
    """
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    dirp = as_point(direction)
    if dirp.dim != oracle.domain.dim:
        raise DimensionMismatchError(
            f"direction of dimension {dirp.dim} vs oracle {oracle.domain.dim}")
    if all(c == 0 for c in dirp):
        raise DomainError("direction must be nonzero")
    schedule = schedule or GridSchedule(base=Point((1.0,)), growth=2.0, levels=40)
    if schedule.dim != 1:
        raise DomainError("ray limits use a one-dimensional parameter schedule")
    ts = schedule.axis_values(0)

    points: list[tuple[float, ...]] = []
    ratios: list[float] = []
    for t in ts:
        coords = tuple(t * c for c in dirp)
        value = oracle.evaluate(coords)
        points.append(coords)
        ratios.append(value / t)
    return _bracket_from_path(points, ratios, list(map(float, ts)), delta, divergence_floor)


# ---------------------------------------------------------------------------
# Inner-limit profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InnerLimitProfile:
    """Sampled values of h(x_i) = nested limit over the chosen axes of f/prod(limit coords).

    When the oracle is componentwise subadditive, h inherits
    subadditivity in the probe variable, which check_subadditivity
    probes directly on the sampled grid.
    """

    oracle: str
    probe_axis: int
    limit_axes: tuple[int, ...]
    fixed: tuple[tuple[int, float], ...]
    entries: tuple[tuple[float, float, str], ...]  # (probe value, h, status)

    def check_subadditivity(self) -> ViolationReport:
        table = {v: h for v, h, status in self.entries if status == CONVERGED}
        violations: list[Violation] = []
        checked = 0
        values = sorted(table)
        for a in values:
            for b in values:
                s = a + b
                if s not in table:
                    continue
                checked += 1
                lhs, rhs = table[s], table[a] + table[b]
                if lhs > rhs + violation_tolerance(lhs, rhs):
                    violations.append(Violation(kind="joint", axis=None,
                                                witness=((a,), (b,)), lhs=lhs, rhs=rhs))
        return ViolationReport(kind="joint", oracle=f"{self.oracle}_inner_profile",
                               violations=tuple(violations), samples_checked=checked,
                               metadata={"probe_axis": self.probe_axis,
                                         "limit_axes": list(self.limit_axes)})


def inner_limit_profile(oracle: FunctionOracle, fixed: Mapping[int, float],
                        limit_axes: Sequence[int], probe_axis: int,
                        probe_values: Sequence[float], delta: float = 0.01, *,
                        schedule: GridSchedule | None = None,
                        max_steps: int = 200) -> InnerLimitProfile:
    """Estimate h at each probe value by nested limits over the chosen axes.

    The denominator carries only the limit-axis coordinates, so the probe
    variable keeps the scale of f itself.  Axes must partition: fixed
    keys + limit axes + the probe axis cover every axis exactly once.
    Divergence at a probe point is flagged per entry, not raised.
    """
    d = oracle.domain.dim
    claimed = sorted([probe_axis, *limit_axes, *fixed])
    if claimed != list(range(d)):
        raise DomainError(
            f"axes do not partition 0..{d - 1}: probe={probe_axis}, "
            f"limits={list(limit_axes)}, fixed={sorted(fixed)}")
    if not limit_axes:
        raise DomainError("need at least one limit axis")
    schedule = schedule or default_schedule(d)
    integer = oracle.domain.integer

    def estimate(depth: int, assigned: dict[int, float]) -> _TailEstimate:
        axis = limit_axes[depth]
        tol = delta * 2.0 ** -(depth + 1)

        def g(x: float) -> float:
            here = dict(assigned)
            here[axis] = x
            if depth == len(limit_axes) - 1:
                point = Point(tuple(here[i] for i in range(d)))
                denom = math.prod(here[j] for j in limit_axes)
                return oracle.evaluate(point) / denom
            return estimate(depth + 1, here).value

        return _adaptive_tail(g, base=schedule.base[axis], growth=schedule.growth,
                              tol=tol, integer=integer, max_steps=max_steps)

    entries: list[tuple[float, float, str]] = []
    for v in probe_values:
        assigned = dict(fixed)
        assigned[probe_axis] = float(v)
        est = estimate(0, assigned)
        entries.append((float(v), est.value, est.status))
    return InnerLimitProfile(oracle=oracle.name, probe_axis=probe_axis,
                             limit_axes=tuple(limit_axes),
                             fixed=tuple(sorted(fixed.items())),
                             entries=tuple(entries))

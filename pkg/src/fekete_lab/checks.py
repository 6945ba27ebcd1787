"""Sampling-based refutation of subadditivity properties.

A check draws a deterministic stream of witnesses candidates, evaluates
the inequality it guards, and reports every sampled violation with its
margin.  Sampling can only refute, never prove: an empty report means
"no violation found at this budget", nothing stronger.

Every reported violation satisfies lhs > rhs + tau with the relative
tolerance tau below, so float rounding noise is never reported.  Random
hits are shrunk toward the small-coordinate corner while the violation
persists, which keeps regression fixtures readable; explicitly probed
pairs are reported as given.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .domain import DomainError, EvaluationError, Point, ext_add, ext_sum
from .registry import Domain, FiniteSetFunction, FunctionOracle
from .sampling import SampleBudget, integer_in, uniform_in

__all__ = [
    "REL_TOL",
    "violation_tolerance",
    "Violation",
    "ViolationReport",
    "check_joint",
    "check_componentwise",
    "check_four_term",
    "check_monoid_sign",
    "check_set_union",
    "check_shifted_subadditivity",
]

# Relative tolerance for inequality checks; the guarded inequalities are
# exact over the reals, so anything below a few ulps is rounding noise.
REL_TOL = 2.0 ** -26

_DEFAULT_POSITIVE_RANGE = (0.1, 100.0)
_DEFAULT_INTEGER_RANGE = (1.0, 100.0)
# stop halving shrunken witnesses near the default range floor: smaller
# coordinates stop being representative of the sampled domain
_SHRINK_FLOOR = 0.05
_MAX_SHRINK_STEPS = 80


def violation_tolerance(lhs: float, rhs: float) -> float:
    if math.isinf(lhs) or math.isinf(rhs):
        return 0.0
    return REL_TOL * max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True)
class Violation:
    kind: str            # joint | componentwise | four_term | monoid | set_union
    axis: int | None
    witness: tuple[tuple, ...]
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "axis": self.axis,
            "witness": [list(w) for w in self.witness],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class ViolationReport:
    kind: str
    oracle: str
    violations: tuple[Violation, ...]
    samples_checked: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        ordered = tuple(sorted(set(self.violations), key=lambda v: (v.witness, v.axis or -1)))
        object.__setattr__(self, "violations", ordered)

    @property
    def clean(self) -> bool:
        return not self.violations

    def find(self, witness: tuple[tuple, ...]) -> Violation | None:
        for v in self.violations:
            if v.witness == witness:
                return v
        return None

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "oracle": self.oracle,
            "samples_checked": self.samples_checked,
            "violation_count": len(self.violations),
            "metadata": self.metadata,
            "violations": [v.to_record() for v in self.violations],
        }

    def to_csv_rows(self) -> list[list[str]]:
        rows = [["kind", "axis", "witness", "lhs", "rhs", "margin"]]
        for v in self.violations:
            witness = "|".join(",".join(repr(c) for c in w) for w in v.witness)
            axis = "" if v.axis is None else str(v.axis)
            rows.append([v.kind, axis, witness, repr(v.lhs), repr(v.rhs), repr(v.margin)])
        return rows


# ---------------------------------------------------------------------------
# Domain-aware candidate streams
# ---------------------------------------------------------------------------

def _axis_range(domain: Domain, axis: int, budget: SampleBudget) -> tuple[float, float]:
    if budget.ranges is not None:
        if len(budget.ranges) != domain.dim:
            raise DomainError("budget must give one range per axis")
        return budget.ranges[axis]
    lo, hi = _DEFAULT_INTEGER_RANGE if domain.integer else _DEFAULT_POSITIVE_RANGE
    if domain.orthant is None:
        return (-hi, hi)
    if domain.orthant.bits[axis] == 1:
        return (-hi, -lo)
    return (lo, hi)


def _sample_coord(domain: Domain, axis: int, budget: SampleBudget, counter: int) -> float:
    if domain.grid_axes is not None:
        # tabulated domains: draw grid coordinates, not floats that would
        # land off-grid with probability one
        grid = domain.grid_axes[axis]
        return grid[integer_in(budget.seed, counter, 0, len(grid) - 1)]
    lo, hi = _axis_range(domain, axis, budget)
    if domain.integer:
        return float(integer_in(budget.seed, counter, int(math.ceil(lo)), int(math.floor(hi))))
    return uniform_in(budget.seed, counter, lo, hi)


def _sample_tuple(domain: Domain, budget: SampleBudget, base_counter: int) -> tuple[float, ...]:
    return tuple(_sample_coord(domain, i, budget, base_counter + i)
                 for i in range(domain.dim))


def _probe_points(domain: Domain) -> list[tuple[float, ...]]:
    """Small deterministic lattice of in-domain points.

    These catch the textbook violations at readable witnesses (unit-ish
    coordinates) before any random sampling runs.
    """
    if domain.grid_axes is not None:
        grid = list(itertools.product(*domain.grid_axes))
        return grid if len(grid) <= 64 else []
    per_axis: list[list[float]] = []
    for i in range(domain.dim):
        if domain.orthant is None:
            per_axis.append([-2.0, -1.0, 1.0, 2.0, 3.0])
        else:
            s = -1.0 if domain.orthant.bits[i] == 1 else 1.0
            per_axis.append([s * 1.0, s * 2.0, s * 3.0])
    return [tuple(c) for c in itertools.product(*per_axis)]


def _pair_in_domain(domain: Domain, x: tuple, y: tuple) -> bool:
    s = tuple(a + b for a, b in zip(x, y))
    try:
        return domain.contains(Point(s))
    except DomainError:
        return False


def _candidate_pairs(domain: Domain, budget: SampleBudget) -> Iterable[tuple[tuple, tuple, bool]]:
    """Yield (x, y, is_probe) with x, y, and x+y all in the domain."""
    probes = _probe_points(domain)
    for x, y in itertools.product(probes, probes):
        if _pair_in_domain(domain, x, y):
            yield x, y, True
    width = 2 * domain.dim
    for j in range(budget.count):
        x = _sample_tuple(domain, budget, j * width)
        y = _sample_tuple(domain, budget, j * width + domain.dim)
        if _pair_in_domain(domain, x, y):
            yield x, y, False


def _shrink_pair(domain: Domain,
                 violated: Callable[[tuple, tuple], tuple[float, float] | None],
                 x: tuple, y: tuple) -> tuple[tuple, tuple, float, float]:
    """Halve the witness toward the origin while the violation persists."""
    best = (x, y) + violated(x, y)  # caller guarantees a violation at (x, y)
    for _ in range(_MAX_SHRINK_STEPS):
        x, y = best[0], best[1]
        if domain.integer:
            nx = tuple(math.copysign(max(1, abs(int(c)) // 2), c) for c in x)
            ny = tuple(math.copysign(max(1, abs(int(c)) // 2), c) for c in y)
        else:
            nx = tuple(c / 2.0 for c in x)
            ny = tuple(c / 2.0 for c in y)
        if (nx, ny) == (x, y) or any(abs(c) < _SHRINK_FLOOR for c in nx + ny):
            break
        if not (_pair_in_domain(domain, nx, ny)
                and domain.contains(Point(nx)) and domain.contains(Point(ny))):
            break
        hit = violated(nx, ny)
        if hit is None:
            break
        best = (nx, ny) + hit
    return best


def _run_pair_check(oracle: FunctionOracle, budget: SampleBudget, kind: str,
                    lhs_rhs: Callable[[tuple, tuple], tuple[float, float]],
                    metadata: dict | None = None) -> ViolationReport:
    domain = oracle.domain

    def violated(x: tuple, y: tuple) -> tuple[float, float] | None:
        try:
            lhs, rhs = lhs_rhs(x, y)
        except (DomainError, EvaluationError) as exc:
            raise EvaluationError(f"evaluation failed at witness ({x}, {y}): {exc}") from exc
        if lhs > rhs + violation_tolerance(lhs, rhs):
            return lhs, rhs
        return None

    violations: list[Violation] = []
    checked = 0
    for x, y, is_probe in _candidate_pairs(domain, budget):
        checked += 1
        hit = violated(x, y)
        if hit is None:
            continue
        if not is_probe:
            x, y, *hit = _shrink_pair(domain, violated, x, y)
        violations.append(Violation(kind=kind, axis=None, witness=(x, y),
                                    lhs=hit[0], rhs=hit[1]))
    return ViolationReport(kind=kind, oracle=oracle.name,
                           violations=tuple(violations), samples_checked=checked,
                           metadata={"seed": budget.seed, "count": budget.count,
                                     **(metadata or {})})


# ---------------------------------------------------------------------------
# The checks
# ---------------------------------------------------------------------------

def check_joint(oracle: FunctionOracle, budget: SampleBudget | None = None) -> ViolationReport:
    """Refute f(x+y) <= f(x) + f(y) over sampled in-domain pairs."""
    budget = budget or SampleBudget()

    def lhs_rhs(x: tuple, y: tuple) -> tuple[float, float]:
        s = tuple(a + b for a, b in zip(x, y))
        return oracle.evaluate(s), ext_add(oracle.evaluate(x), oracle.evaluate(y))

    return _run_pair_check(oracle, budget, "joint", lhs_rhs)


def check_componentwise(oracle: FunctionOracle,
                        budget: SampleBudget | None = None) -> ViolationReport:
    """Refute per-axis subadditivity: f(.., x_i + y_i, ..) <= f(x) + f(x_i -> y_i).

    The witness pair is the base point and the base point with axis i
    replaced, so both evaluations sit on the same axis-i line.
    """
    budget = budget or SampleBudget()
    domain = oracle.domain
    violations: list[Violation] = []
    checked = 0

    for axis in range(domain.dim):

        def violated(x: tuple, y: tuple) -> tuple[float, float] | None:
            z = tuple(x[i] + y[i] if i == axis else x[i] for i in range(len(x)))
            try:
                lhs = oracle.evaluate(z)
                rhs = ext_add(oracle.evaluate(x), oracle.evaluate(y))
            except (DomainError, EvaluationError) as exc:
                raise EvaluationError(
                    f"evaluation failed at axis-{axis} witness ({x}, {y}): {exc}") from exc
            if lhs > rhs + violation_tolerance(lhs, rhs):
                return lhs, rhs
            return None

        for x, y0, is_probe in _candidate_pairs(domain, budget):
            # restrict the second point to the axis-i line through x
            y = tuple(y0[i] if i == axis else x[i] for i in range(domain.dim))
            if not domain.contains(Point(y)):
                continue
            checked += 1
            hit = violated(x, y)
            if hit is None:
                continue
            if not is_probe:
                x, y, *hit = _shrink_pair(domain, violated, x, y)
            violations.append(Violation(kind="componentwise", axis=axis,
                                        witness=(x, y), lhs=hit[0], rhs=hit[1]))

    return ViolationReport(kind="componentwise", oracle=oracle.name,
                           violations=tuple(violations), samples_checked=checked,
                           metadata={"seed": budget.seed, "count": budget.count})


def check_four_term(oracle: FunctionOracle,
                    budget: SampleBudget | None = None) -> ViolationReport:
    """Refute the 2^d-term mixed bound f(x+y) <= sum over sign words of f(mix).

    For d = 2 this is the classical four-term inequality; the mixed
    point takes x_i on axes where the word bit is 0 and y_i where it
    is 1.  Componentwise subadditivity implies this bound, and for
    nonnegative f it is weaker than joint subadditivity.
    """
    budget = budget or SampleBudget()
    d = oracle.domain.dim

    def lhs_rhs(x: tuple, y: tuple) -> tuple[float, float]:
        s = tuple(a + b for a, b in zip(x, y))
        lhs = oracle.evaluate(s)
        terms = []
        for bits in itertools.product((0, 1), repeat=d):
            mix = tuple(y[i] if bits[i] else x[i] for i in range(d))
            terms.append(oracle.evaluate(mix))
        return lhs, ext_sum(terms)

    return _run_pair_check(oracle, budget, "four_term", lhs_rhs)


def check_monoid_sign(oracle: FunctionOracle,
                      budget: SampleBudget | None = None) -> ViolationReport:
    """Check the sign consequences of subadditivity on a monoid/group.

    Subadditive f must have f(0) >= 0, and on a group f(x) + f(-x) >= 0.
    Violations are recorded with lhs = 0 so that margin = -f(...) stays
    positive, matching the other report kinds.  Only meaningful for
    oracles that already look jointly subadditive.
    """
    budget = budget or SampleBudget()
    domain = oracle.domain
    if domain.orthant is not None or domain.grid_axes is not None:
        raise DomainError("monoid check needs an oracle on the whole of R^d or Z^d")

    violations: list[Violation] = []
    zero = (0.0,) * domain.dim
    f0 = oracle.evaluate(zero)
    checked = 1
    if 0.0 > f0 + violation_tolerance(0.0, f0):
        violations.append(Violation(kind="monoid", axis=None, witness=(zero,),
                                    lhs=0.0, rhs=f0))

    candidates = _probe_points(domain)
    for j in range(budget.count):
        candidates.append(_sample_tuple(domain, budget, j * domain.dim))
    for x in candidates:
        neg = tuple(-c for c in x)
        checked += 1
        total = ext_add(oracle.evaluate(x), oracle.evaluate(neg))
        if 0.0 > total + violation_tolerance(0.0, total):
            violations.append(Violation(kind="monoid", axis=None, witness=(x, neg),
                                        lhs=0.0, rhs=total))

    return ViolationReport(kind="monoid", oracle=oracle.name,
                           violations=tuple(violations), samples_checked=checked,
                           metadata={"seed": budget.seed, "count": budget.count})


def check_set_union(g: FiniteSetFunction,
                    family: Sequence[Iterable[int]]) -> ViolationReport:
    """Refute g(A u B) <= g(A) + g(B) over all pairs from the family."""
    sets = [frozenset(int(n) for n in s) for s in family]
    if not sets:
        raise DomainError("set family must be nonempty")
    violations: list[Violation] = []
    checked = 0
    for i, a in enumerate(sets):
        for b in sets[i:]:
            checked += 1
            lhs = g.evaluate(a | b)
            rhs = ext_add(g.evaluate(a), g.evaluate(b))
            if lhs > rhs + violation_tolerance(lhs, rhs):
                witness = (tuple(sorted(a)), tuple(sorted(b)))
                violations.append(Violation(kind="set_union", axis=None,
                                            witness=witness, lhs=lhs, rhs=rhs))
    return ViolationReport(kind="set_union", oracle=g.name,
                           violations=tuple(violations), samples_checked=checked)


def check_shifted_subadditivity(oracle: FunctionOracle, shift: int,
                                budget: SampleBudget | None = None) -> ViolationReport:
    """Run the joint check on the translate h(n) = f(n + shift).

    Translation does not preserve subadditivity in general, so a clean
    report for f says nothing about its shifts.
    """
    if oracle.domain.dim != 1 or not oracle.domain.integer or oracle.domain.orthant is not None:
        raise DomainError("shifted check needs a one-dimensional oracle on all of Z")
    shifted = FunctionOracle(
        name=f"{oracle.name}_shifted_by_{shift}",
        domain=oracle.domain,
        fn=lambda p: oracle.evaluate((p[0] + shift,)),
    )
    report = check_joint(shifted, budget)
    return ViolationReport(kind=report.kind, oracle=report.oracle,
                           violations=report.violations,
                           samples_checked=report.samples_checked,
                           metadata={**report.metadata, "shift": shift})

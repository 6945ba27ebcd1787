"""Core geometry for directed limits on orthants of R^d and Z^d.

Points, orthant sign words with their product orders, the q*t + r step
decomposition used by the limit estimators, and geometric sampling
schedules.  Every value here is immutable after construction and every
function is pure, so concurrent use needs no synchronization.

Reals are IEEE double precision throughout; exactness claims are made
"to one ulp".  The extended reals are ordinary floats allowed to be
+inf or -inf but never NaN: arithmetic that would produce an
indeterminate form raises instead of silently propagating NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


__all__ = [
    "FeketeLabError",
    "ConfigError",
    "DimensionMismatchError",
    "DomainError",
    "EvaluationError",
    "IndeterminateFormError",
    "as_extended",
    "ext_add",
    "ext_sum",
    "Point",
    "as_point",
    "Orthant",
    "product_leq",
    "directed_upper_bound",
    "orthant_reflect",
    "QRDecomposition",
    "qr_decompose",
    "GridSchedule",
]


class FeketeLabError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(FeketeLabError):
    """Unusable configuration: unknown names, bad flags, malformed files."""


class DimensionMismatchError(FeketeLabError):
    """Operands declare different dimensions."""


class DomainError(FeketeLabError):
    """A point lies outside the domain an operation requires."""


class EvaluationError(FeketeLabError):
    """An oracle evaluation failed or returned NaN."""


class IndeterminateFormError(FeketeLabError):
    """Arithmetic would produce an indeterminate form such as inf - inf."""


# ---------------------------------------------------------------------------
# Extended reals
# ---------------------------------------------------------------------------

def as_extended(value: float) -> float:
    """Coerce to float, accepting +-inf but rejecting NaN."""
    x = float(value)
    if math.isnan(x):
        raise EvaluationError("NaN is not a member of the extended reals")
    return x


def ext_add(a: float, b: float) -> float:
    """Add two extended reals, raising on inf + (-inf)."""
    if math.isinf(a) and math.isinf(b) and (a > 0) != (b > 0):
        raise IndeterminateFormError(f"indeterminate sum {a} + {b}")
    return a + b


def ext_sum(values: Iterable[float]) -> float:
    total = 0.0
    for v in values:
        total = ext_add(total, v)
    return total


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Point:
    """A point of R^d with finite coordinates, d >= 1."""

    coords: tuple[float, ...]

    def __post_init__(self) -> None:
        coords = tuple(float(c) for c in self.coords)
        if len(coords) < 1:
            raise DomainError("a point needs at least one coordinate")
        for c in coords:
            if not math.isfinite(c):
                raise DomainError(f"non-finite coordinate {c!r}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[float]:
        return iter(self.coords)

    def __getitem__(self, i: int) -> float:
        return self.coords[i]

    def replace(self, axis: int, value: float) -> "Point":
        coords = list(self.coords)
        coords[axis] = value
        return Point(tuple(coords))

    def product(self) -> float:
        return math.prod(self.coords)


def as_point(value: Point | Sequence[float] | float) -> Point:
    if isinstance(value, Point):
        return value
    if isinstance(value, (int, float)):
        return Point((float(value),))
    return Point(tuple(value))


# ---------------------------------------------------------------------------
# Orthants and the product order
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Orthant:
    """Sign word w in {0,1}^d selecting an open orthant.

    Axis i carries the ordinary order when w_i = 0 (positive half-line)
    and the reversed order when w_i = 1 (negative half-line), so the
    word both names the region and fixes its product order direction.
    """

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if len(bits) < 1:
            raise DomainError("an orthant word needs length >= 1")
        if any(b not in (0, 1) for b in bits):
            raise DomainError(f"orthant word must be binary, got {bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, word: str) -> "Orthant":
        return cls(tuple(int(ch) for ch in word))

    @classmethod
    def main(cls, dim: int) -> "Orthant":
        return cls((0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.bits)

    @property
    def parity(self) -> int:
        """Number of reversed axes mod 2."""
        return sum(self.bits) % 2

    @property
    def is_main(self) -> bool:
        return not any(self.bits)

    def sign(self, axis: int) -> int:
        return -1 if self.bits[axis] else 1

    def contains(self, point: Point) -> bool:
        if point.dim != self.dim:
            raise DimensionMismatchError(
                f"point of dimension {point.dim} vs orthant word of length {self.dim}"
            )
        return all(c * self.sign(i) > 0 for i, c in enumerate(point))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def _require_in_orthant(point: Point, orthant: Orthant, label: str) -> None:
    if not orthant.contains(point):
        raise DomainError(f"{label}={tuple(point)} is not in orthant {orthant}")


def product_leq(x: Point | Sequence[float], y: Point | Sequence[float],
                orthant: Orthant) -> bool:
    """Product-order comparison inside an orthant.

    Ordinary <= on axes with bit 0, reversed >= on axes with bit 1, so
    "later" always means farther from the origin.
    """
    px, py = as_point(x), as_point(y)
    _require_in_orthant(px, orthant, "x")
    _require_in_orthant(py, orthant, "y")
    for i in range(orthant.dim):
        if orthant.bits[i] == 0:
            if not px[i] <= py[i]:
                return False
        else:
            if not px[i] >= py[i]:
                return False
    return True


def directed_upper_bound(x: Point | Sequence[float], y: Point | Sequence[float],
                         orthant: Orthant) -> Point:
    """A common upper bound of x and y: coordinatewise max, min on reversed axes."""
    px, py = as_point(x), as_point(y)
    _require_in_orthant(px, orthant, "x")
    _require_in_orthant(py, orthant, "y")
    coords = tuple(
        min(px[i], py[i]) if orthant.bits[i] else max(px[i], py[i])
        for i in range(orthant.dim)
    )
    return Point(coords)


def orthant_reflect(x: Point | Sequence[float], orthant: Orthant) -> Point:
    """Map a point of orthant w onto the main orthant by flipping reversed axes.

    The map is an involution: applying it with the same word returns the
    original point.
    """
    px = as_point(x)
    _require_in_orthant(px, orthant, "x")
    return Point(tuple(c * orthant.sign(i) for i, c in enumerate(px)))


# ---------------------------------------------------------------------------
# The q*t + r step decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QRDecomposition:
    """Writing x = q*t + r with q a positive integer and r in [t, 2t)."""

    q: int
    r: float
    t: float

    def reconstruct(self) -> float:
        return self.q * self.t + self.r


def qr_decompose(x: float, t: float) -> QRDecomposition:
    """Decompose x >= 2t as x = q*t + r with q >= 1 integer, r in [t, 2t).

    The representation is unique in exact arithmetic.  In floating point
    a computed remainder landing exactly on 2t is resolved downward into
    q+1 so the rule stays deterministic.
    """
    x = float(x)
    t = float(t)
    if not (t > 0.0 and math.isfinite(t)):
        raise DomainError(f"step must be positive and finite, got {t!r}")
    if not math.isfinite(x) or x < 2.0 * t:
        raise DomainError(f"x={x!r} has no representation with q >= 1 and r >= t={t!r}")
    ulp = math.ulp(max(abs(x), 1.0))
    q0 = int(math.floor((x - t) / t))
    # Rounding of (x - t)/t can land one step off in either direction;
    # prefer the largest valid q, which resolves a remainder computed at
    # the 2t boundary downward into q + 1.
    for q in (q0 + 1, q0, q0 - 1):
        if q < 1:
            continue
        r = x - q * t
        if t - ulp <= r < 2.0 * t and abs(q * t + r - x) <= ulp:
            return QRDecomposition(q=q, r=r, t=t)
    raise FeketeLabError(
        f"step decomposition invariant failed for x={x!r}, t={t!r} near q={q0}"
    )


# ---------------------------------------------------------------------------
# Geometric sampling schedules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSchedule:
    """Geometric per-axis sampling schedule: coordinate i takes base_i * growth^k.

    Levels run k = 0..levels inclusive.  Geometric spacing keeps sample
    counts polynomial in the level count while the step-count ratio q/x
    converges quickly, which is what the limit estimators need.
    """

    base: Point
    growth: float = 2.0
    levels: int = 40

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", as_point(self.base))
        if not all(c > 0 for c in self.base):
            raise DomainError("schedule base must have positive coordinates")
        if not self.growth > 1.0:
            raise DomainError(f"growth factor must exceed 1, got {self.growth!r}")
        if self.levels < 1:
            raise DomainError(f"level count must be >= 1, got {self.levels!r}")

    @property
    def dim(self) -> int:
        return self.base.dim

    def axis_values(self, axis: int, *, integer: bool = False) -> list[float] | list[int]:
        """Sample coordinates for one axis, strictly increasing.

        Integer mode rounds each level to the nearest integer; the base
        must be a whole number >= 1 and the rounded ladder must still be
        strictly increasing (guaranteed for growth >= 2).
        """
        b = self.base[axis]
        raw = [b * self.growth ** k for k in range(self.levels + 1)]
        if not integer:
            for v in raw:
                if not math.isfinite(v):
                    raise DomainError("schedule coordinate overflowed; reduce levels")
            return raw
        if b != int(b) or b < 1:
            raise DomainError(f"integer schedules need whole base coordinates >= 1, got {b!r}")
        vals = [int(round(v)) for v in raw]
        if any(n >= m for n, m in zip(vals, vals[1:])):
            raise DomainError("integer schedule is not strictly increasing; use growth >= 2")
        return vals

    def point_at(self, level: int, *, integer: bool = False) -> Point:
        return Point(tuple(self.axis_values(i, integer=integer)[level]
                           for i in range(self.dim)))


def default_schedule(dim: int, *, growth: float = 2.0, levels: int = 40) -> GridSchedule:
    return GridSchedule(base=Point((1.0,) * dim), growth=growth, levels=levels)

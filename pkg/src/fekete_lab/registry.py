"""Evaluable function oracles and the built-in example functions.

An oracle bundles a named function with its declared domain and the
claims made about it (componentwise subadditive, jointly subadditive,
known limit of f(x)/prod(x) with a provenance note).  Claims are inputs
to the checkers and estimators, never conclusions: the checkers exist to
refute them and the estimators only certify their brackets when the
componentwise claim is trusted.

Oracles are immutable and evaluation is pure, so they are safe to share
across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .domain import (
    ConfigError,
    DimensionMismatchError,
    DomainError,
    EvaluationError,
    Orthant,
    Point,
    as_extended,
    as_point,
)

__all__ = [
    "Domain",
    "KnownLimit",
    "FunctionOracle",
    "builtin",
    "builtin_names",
    "IRRATIONAL",
    "rubin_eval",
    "TabulatedFunction",
    "load_tabulated",
    "write_tabulated",
    "FiniteSetFunction",
    "set_function_from_integer",
    "cardinality_set_function",
    "load_set_family",
]


# ---------------------------------------------------------------------------
# Domains and oracles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Domain:
    """Where an oracle is defined.

    orthant None means the whole space (R^d or Z^d, an additive group);
    a word restricts to that open orthant.  grid_axes marks a tabulated
    function defined only on the cartesian grid of those coordinates.
    """

    dim: int
    orthant: Orthant | None = None
    integer: bool = False
    grid_axes: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DomainError(f"dimension must be >= 1, got {self.dim!r}")
        if self.orthant is not None and self.orthant.dim != self.dim:
            raise DimensionMismatchError(
                f"orthant word length {self.orthant.dim} != dimension {self.dim}"
            )
        if self.grid_axes is not None and len(self.grid_axes) != self.dim:
            raise DimensionMismatchError("one grid axis per dimension required")

    def contains(self, point: Point) -> bool:
        if point.dim != self.dim:
            raise DimensionMismatchError(
                f"point of dimension {point.dim} vs domain of dimension {self.dim}"
            )
        if self.integer and any(c != int(c) for c in point):
            return False
        if self.grid_axes is not None:
            return all(c in axis for c, axis in zip(point, self.grid_axes))
        if self.orthant is not None:
            return self.orthant.contains(point)
        return True


@dataclass(frozen=True)
class KnownLimit:
    """An externally known value for the limit of f(x)/prod(x), with its source."""

    value: float
    note: str


@dataclass(frozen=True)
class FunctionOracle:
    name: str
    domain: Domain
    fn: Callable[[Point], float]
    claims_componentwise_subadditive: bool = False
    claims_joint_subadditive: bool = False
    known_limit: KnownLimit | None = None
    # optional vectorized path over numpy meshgrids, used by quadrature
    array_fn: Callable[..., np.ndarray] | None = field(default=None, repr=False)

    def evaluate(self, point: Point | Sequence[float] | float) -> float:
        p = as_point(point)
        if not self.domain.contains(p):
            raise DomainError(f"{tuple(p)} is outside the domain of {self.name!r}")
        return as_extended(self.fn(p))

    def evaluate_mesh(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Evaluate on the full cartesian grid of the given axis arrays."""
        grids = np.meshgrid(*[np.asarray(a, dtype=float) for a in axes], indexing="ij")
        if self.array_fn is not None:
            values = np.asarray(self.array_fn(*grids), dtype=float)
        else:
            values = np.empty(grids[0].shape, dtype=float)
            for idx in np.ndindex(*grids[0].shape):
                values[idx] = self.fn(Point(tuple(g[idx] for g in grids)))
        if np.isnan(values).any():
            raise EvaluationError(f"{self.name!r} produced NaN on the evaluation grid")
        return values

    def evaluate_points(self, columns: Sequence[np.ndarray]) -> np.ndarray:
        """Evaluate pointwise on parallel coordinate columns (one array per axis)."""
        cols = [np.asarray(c, dtype=float) for c in columns]
        if self.array_fn is not None:
            values = np.asarray(self.array_fn(*cols), dtype=float)
        else:
            values = np.empty(cols[0].shape, dtype=float)
            for j in range(cols[0].size):
                values[j] = self.fn(Point(tuple(c[j] for c in cols)))
        if np.isnan(values).any():
            raise EvaluationError(f"{self.name!r} produced NaN on the evaluation points")
        return values


# ---------------------------------------------------------------------------
# Exact-rational minimum-denominator function
# ---------------------------------------------------------------------------

class _Irrational:
    """Marker for an input declared irrational (denominator function gives 0)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "IRRATIONAL"


IRRATIONAL = _Irrational()


def _denominator(value: Fraction | int | object) -> int:
    if value is IRRATIONAL:
        return 0
    if isinstance(value, Fraction):
        if value <= 0:
            raise DomainError(f"coordinate must be positive, got {value!r}")
        return value.denominator
    if isinstance(value, int):
        if value <= 0:
            raise DomainError(f"coordinate must be positive, got {value!r}")
        return 1
    raise DomainError(
        f"expected Fraction, int, or IRRATIONAL, got {value!r}; rationality of a "
        "float is not decidable, so inputs must be exact"
    )


def rubin_eval(coords: Sequence[Fraction | int | object]) -> float:
    """min over coordinates of the reduced-denominator function h.

    h(p/q) = q for a positive fraction in lowest terms (Fraction reduces
    automatically and rejects zero denominators at construction), h = 1
    on positive integers, and h = 0 on inputs declared IRRATIONAL.
    """
    values = [_denominator(c) for c in coords]
    if not values:
        raise DomainError("at least one coordinate required")
    return float(min(values))


def _rubin_point_eval(point: Point) -> float:
    # Float coordinates are only accepted when integral (exactly the
    # integer they denote); anything else must go through rubin_eval
    # with exact Fraction inputs.
    exact: list[int] = []
    for c in point:
        if c != int(c):
            raise EvaluationError(
                "rubin_min_denominator needs exact rational inputs; "
                "use rubin_eval with Fraction coordinates"
            )
        exact.append(int(c))
    return rubin_eval(exact)


# ---------------------------------------------------------------------------
# Built-in oracles
# ---------------------------------------------------------------------------

def _main_real(d: int) -> Domain:
    return Domain(dim=d, orthant=Orthant.main(d))


def _main_int(d: int) -> Domain:
    return Domain(dim=d, orthant=Orthant.main(d), integer=True)


_BUILTINS: dict[str, Callable[[], FunctionOracle]] = {
    "sqrt_prod": lambda: FunctionOracle(
        name="sqrt_prod",
        domain=_main_real(2),
        fn=lambda p: math.sqrt(p[0] * p[1]),
        array_fn=lambda x1, x2: np.sqrt(x1 * x2),
        claims_componentwise_subadditive=True,
        claims_joint_subadditive=False,
        known_limit=KnownLimit(0.0, "analytic: inf of 1/sqrt(x1*x2) over the positive quadrant is 0"),
    ),
    # jointly subadditive (sqrt(x2+y2) dominates both sqrt(x2) and
    # sqrt(y2)) yet not subadditive in x2 alone: the mirror image of
    # sqrt_prod, which is componentwise subadditive but not joint
    "neg_x1_sqrt_x2": lambda: FunctionOracle(
        name="neg_x1_sqrt_x2",
        domain=_main_real(2),
        fn=lambda p: -p[0] * math.sqrt(p[1]),
        array_fn=lambda x1, x2: -x1 * np.sqrt(x2),
        claims_componentwise_subadditive=False,
        claims_joint_subadditive=True,
        known_limit=KnownLimit(0.0, "analytic: ratio -1/sqrt(x2) tends to 0"),
    ),
    "rubin_min_denominator": lambda: FunctionOracle(
        name="rubin_min_denominator",
        domain=_main_real(2),
        fn=_rubin_point_eval,
        claims_componentwise_subadditive=False,
        claims_joint_subadditive=False,
    ),
    "x1sq_sqrt_x2": lambda: FunctionOracle(
        name="x1sq_sqrt_x2",
        domain=_main_real(2),
        fn=lambda p: p[0] * p[0] * math.sqrt(p[1]),
        array_fn=lambda x1, x2: x1 * x1 * np.sqrt(x2),
        claims_componentwise_subadditive=False,
        claims_joint_subadditive=False,
    ),
    "nmod2": lambda: FunctionOracle(
        name="nmod2",
        domain=Domain(dim=1, orthant=None, integer=True),
        fn=lambda p: float(int(p[0]) % 2),
        claims_componentwise_subadditive=True,
        claims_joint_subadditive=True,
        known_limit=KnownLimit(0.0, "analytic: (n mod 2)/n vanishes along even n"),
    ),
    "full_shift_count_log": lambda: FunctionOracle(
        name="full_shift_count_log",
        domain=_main_int(2),
        fn=lambda p: p[0] * p[1],
        array_fn=lambda x1, x2: x1 * x2,
        claims_componentwise_subadditive=True,
        claims_joint_subadditive=False,
        known_limit=KnownLimit(1.0, "analytic: ratio n1*n2/(n1*n2) is identically 1"),
    ),
    "ceiling": lambda: FunctionOracle(
        name="ceiling",
        domain=Domain(dim=1, orthant=None, integer=False),
        fn=lambda p: float(math.ceil(p[0])),
        array_fn=lambda x: np.ceil(x),
        claims_componentwise_subadditive=True,
        claims_joint_subadditive=True,
        known_limit=KnownLimit(1.0, "analytic: ceil(x)/x attains its infimum 1 at integers"),
    ),
    "abs": lambda: FunctionOracle(
        name="abs",
        domain=Domain(dim=1, orthant=None, integer=False),
        fn=lambda p: abs(p[0]),
        array_fn=lambda x: np.abs(x),
        claims_componentwise_subadditive=True,
        claims_joint_subadditive=True,
        known_limit=KnownLimit(1.0, "analytic: |x|/x = 1 for x > 0"),
    ),
}


def builtin(name: str) -> FunctionOracle:
    """Look up a built-in oracle by registry name."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        known = ", ".join(sorted(_BUILTINS))
        raise ConfigError(f"unknown builtin {name!r}; available: {known}") from None
    return factory()


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTINS))


# ---------------------------------------------------------------------------
# Tabulated functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TabulatedFunction:
    """A function given by exact values on a cartesian grid.

    Evaluation is lookup only: querying off the grid is an error rather
    than an interpolation, because interpolation can manufacture or
    destroy subadditivity and the checkers must not report artifacts of
    resampling.
    """

    axes: tuple[tuple[float, ...], ...]
    values: tuple[float, ...]  # row-major over the axes

    def __post_init__(self) -> None:
        axes = tuple(tuple(float(c) for c in axis) for axis in self.axes)
        values = tuple(float(v) for v in self.values)
        if not axes:
            raise DomainError("at least one axis required")
        for axis in axes:
            if len(axis) < 1 or any(a >= b for a, b in zip(axis, axis[1:])):
                raise DomainError("axes must be nonempty and strictly increasing")
        expected = math.prod(len(axis) for axis in axes)
        if len(values) != expected:
            raise DomainError(
                f"value array of length {len(values)} does not fill a grid of size {expected}"
            )
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return len(self.axes)

    def lookup(self, point: Point) -> float:
        index = 0
        for c, axis in zip(point, self.axes):
            try:
                i = axis.index(c)
            except ValueError:
                raise DomainError(
                    f"coordinate {c!r} is off-grid for axis {axis!r}; no interpolation"
                ) from None
            index = index * len(axis) + i
        return self.values[index]

    def to_oracle(self, name: str = "tabulated", *,
                  claims_componentwise_subadditive: bool = False,
                  claims_joint_subadditive: bool = False) -> FunctionOracle:
        return FunctionOracle(
            name=name,
            domain=Domain(dim=self.dim, grid_axes=self.axes),
            fn=self.lookup,
            claims_componentwise_subadditive=claims_componentwise_subadditive,
            claims_joint_subadditive=claims_joint_subadditive,
        )

    def to_json_dict(self) -> dict:
        return {"dim": self.dim, "axes": [list(a) for a in self.axes],
                "values": list(self.values)}


def _parse_tabulated(obj: dict) -> TabulatedFunction:
    try:
        dim = int(obj["dim"])
        axes = tuple(tuple(float(c) for c in axis) for axis in obj["axes"])
        values = tuple(float(v) for v in obj["values"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed tabulated-function object: {exc}") from exc
    if len(axes) != dim:
        raise ConfigError(f"declared dim {dim} but {len(axes)} axes given")
    return TabulatedFunction(axes=axes, values=values)


def load_tabulated(path: str | Path, name: str | None = None) -> FunctionOracle:
    """Load a tabulated oracle from JSON {"dim", "axes", "values"} (row-major)."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read tabulated function from {path}: {exc}") from exc
    table = _parse_tabulated(obj)
    return table.to_oracle(name or path.stem)


def write_tabulated(path: str | Path, table: TabulatedFunction) -> None:
    Path(path).write_text(json.dumps(table.to_json_dict(), sort_keys=True))


# ---------------------------------------------------------------------------
# Functions of finite integer sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteSetFunction:
    """A real-valued function of finite subsets of the integers."""

    name: str
    fn: Callable[[frozenset[int]], float]
    translation_invariant: bool = True

    def evaluate(self, subset: Iterable[int]) -> float:
        s = frozenset(int(n) for n in subset)
        return as_extended(self.fn(s))


def set_function_from_integer(oracle: FunctionOracle,
                              name: str | None = None) -> FiniteSetFunction:
    """Lift an integer function to sets via cardinality: g(A) = f(|A|), g({}) = 0.

    The lift is invariant under translating A, but it need not preserve
    subadditivity because |A u B| need not equal |A| + |B|.
    """
    if oracle.domain.dim != 1 or not oracle.domain.integer:
        raise DomainError("cardinality lift needs a one-dimensional integer oracle")

    def g(s: frozenset[int]) -> float:
        if not s:
            return 0.0
        return oracle.evaluate((float(len(s)),))

    return FiniteSetFunction(name=name or f"{oracle.name}_of_cardinality", fn=g)


def cardinality_set_function() -> FiniteSetFunction:
    return FiniteSetFunction(name="cardinality", fn=lambda s: float(len(s)))


def load_set_family(path: str | Path) -> tuple[FiniteSetFunction, list[frozenset[int]]]:
    """Load {"base": name, "sets": [[...], ...]} for the set-union checker.

    base is either "cardinality" or the name of a built-in integer
    oracle to lift via set_function_from_integer.
    """
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
        base = str(obj["base"])
        raw_sets = obj["sets"]
        family = [frozenset(int(n) for n in s) for s in raw_sets]
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"cannot read set family from {path}: {exc}") from exc
    if base == "cardinality":
        g = cardinality_set_function()
    else:
        g = set_function_from_integer(builtin(base))
    if not family:
        raise ConfigError("set family must be nonempty")
    return g, family

"""Exact pattern counting for subshifts of finite type and entropy bounds.

Counts are of locally admissible patterns: symbol boxes containing no
translate of a forbidden pattern fully inside the box.  Extendability
to a full configuration is undecidable in general for d >= 2, so the
locally admissible convention is used throughout and recorded in every
result; these counts are submultiplicative under splitting any side, so
the limit machinery applies and every ratio log_a(count)/volume is a
true upper bound for the entropy.

All counts are exact arbitrary-precision integers.  The enumerator is a
depth-first search in row-major cell order with incremental checks of
newly completed forbidden translates, memoized on the frontier window
(the trailing cells future checks can still read), which keeps the
effective state space far below the raw a^cells search space.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .checks import Violation, ViolationReport
from .domain import ConfigError, DomainError, FeketeLabError

__all__ = [
    "CapExceededError",
    "ForbiddenPattern",
    "SftSpec",
    "PatternCount",
    "count_patterns",
    "log_complexity",
    "transfer_matrix_count_1d",
    "transfer_matrix_1d",
    "dominant_eigenvalue",
    "EntropyEntry",
    "EntropyBracket",
    "entropy_bounds",
    "check_count_submultiplicativity",
    "folner_box_ratio",
    "builtin_sft",
    "builtin_sft_names",
    "load_sft_spec",
    "sft_to_json_dict",
    "relabel",
]

MAX_PATTERN_SIDE = 8          # enumeration feasibility cap per axis
DEFAULT_CELL_CAP_BITS = 144.0  # cells * log2(a) <= this (12x12 at two symbols)
DEFAULT_STATE_CAP_BITS = 48.0  # frontier window * log2(a) <= this


class CapExceededError(FeketeLabError):
    """The requested box exceeds the configured enumeration work caps."""


@dataclass(frozen=True)
class ForbiddenPattern:
    """A finite partial symbol assignment whose translates are forbidden."""

    offsets: tuple[tuple[int, ...], ...]
    symbols: tuple[int, ...]

    def __post_init__(self) -> None:
        offsets = tuple(tuple(int(c) for c in off) for off in self.offsets)
        symbols = tuple(int(s) for s in self.symbols)
        if not offsets:
            raise DomainError("a forbidden pattern needs at least one cell")
        if len(offsets) != len(symbols):
            raise DomainError("one symbol per offset required")
        if len(set(offsets)) != len(offsets):
            raise DomainError("duplicate offsets in forbidden pattern")
        dims = {len(off) for off in offsets}
        if len(dims) != 1:
            raise DomainError("offsets of mixed dimension")
        for axis in range(next(iter(dims))):
            lo = min(off[axis] for off in offsets)
            hi = max(off[axis] for off in offsets)
            if hi - lo + 1 > MAX_PATTERN_SIDE:
                raise DomainError(
                    f"pattern bounding box exceeds {MAX_PATTERN_SIDE} on axis {axis}")
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "symbols", symbols)

    @property
    def dim(self) -> int:
        return len(self.offsets[0])

    def extent(self, axis: int) -> int:
        lo = min(off[axis] for off in self.offsets)
        hi = max(off[axis] for off in self.offsets)
        return hi - lo + 1


@dataclass(frozen=True)
class SftSpec:
    """Alphabet size, dimension, and finite forbidden-pattern list."""

    alphabet: int
    dim: int
    forbidden: tuple[ForbiddenPattern, ...] = ()

    def __post_init__(self) -> None:
        if self.alphabet < 2:
            raise DomainError(f"alphabet size must be >= 2, got {self.alphabet!r}")
        if self.dim < 1:
            raise DomainError(f"dimension must be >= 1, got {self.dim!r}")
        forbidden = tuple(self.forbidden)
        for pat in forbidden:
            if pat.dim != self.dim:
                raise DomainError(f"pattern of dimension {pat.dim} in a {self.dim}-d subshift")
            if any(not 0 <= s < self.alphabet for s in pat.symbols):
                raise DomainError("pattern symbol outside the alphabet")
        object.__setattr__(self, "forbidden", forbidden)


@dataclass(frozen=True)
class PatternCount:
    sides: tuple[int, ...]
    count: int
    admissibility: str = "locally_admissible"


def _validate_sides(sft: SftSpec, sides: Sequence[int]) -> tuple[int, ...]:
    sides = tuple(int(n) for n in sides)
    if len(sides) != sft.dim:
        raise DomainError(f"{len(sides)} sides for a {sft.dim}-dimensional subshift")
    if any(n < 1 for n in sides):
        raise DomainError(f"sides must be >= 1, got {sides!r}")
    return sides


def _placements(sft: SftSpec, sides: tuple[int, ...]) -> tuple[list[list[tuple]], int]:
    """Per-cell incremental checks for the row-major enumerator.

    For each cell index k, the list of forbidden-pattern translates
    whose row-major-last cell is k and which fit fully inside the box;
    each entry is (deltas, symbols) with row-major deltas <= 0.  Also
    returns the frontier span: how far back any future check can reach.
    """
    d = sft.dim
    strides = [0] * d
    strides[d - 1] = 1
    for i in range(d - 2, -1, -1):
        strides[i] = strides[i + 1] * sides[i + 1]
    cells = strides[0] * sides[0]

    def rm(coord: tuple[int, ...]) -> int:
        return sum(c * s for c, s in zip(coord, strides))

    checks: list[list[tuple]] = [[] for _ in range(cells)]
    span = 0
    for pat in sft.forbidden:
        if any(pat.extent(axis) > sides[axis] for axis in range(d)):
            continue  # cannot fit inside this box
        # Within a box the pattern fits, row-major order of its cells is
        # the lexicographic order of the offsets.
        anchor = max(pat.offsets)
        rel = [tuple(o - a for o, a in zip(off, anchor)) for off in pat.offsets]
        for cell_coord in itertools.product(*[range(s) for s in sides]):
            placed = [tuple(c + r for c, r in zip(cell_coord, off)) for off in rel]
            if any(not 0 <= pc[i] < sides[i] for pc in placed for i in range(d)):
                continue
            k = rm(cell_coord)
            deltas = tuple(rm(pc) - k for pc in placed)
            span = max(span, max(-dlt for dlt in deltas))
            checks[k].append((deltas, pat.symbols))
    return checks, span


def count_patterns(sft: SftSpec, sides: Sequence[int], *,
                   cell_cap_bits: float = DEFAULT_CELL_CAP_BITS,
                   state_cap_bits: float = DEFAULT_STATE_CAP_BITS) -> PatternCount:
    """Exactly count locally admissible symbol boxes of the given sides.

    Depth-first over cells in row-major order; a symbol choice is
    checked against every forbidden translate it completes.  Suffix
    counts are memoized on (position, trailing window), which is valid
    because no future check reads anything older than the window.
    """
    sides = _validate_sides(sft, sides)
    cells = math.prod(sides)
    log2a = math.log2(sft.alphabet)
    if cells * log2a > cell_cap_bits:
        raise CapExceededError(
            f"box of {cells} cells over {sft.alphabet} symbols exceeds the "
            f"{cell_cap_bits}-bit cell cap")
    checks, span = _placements(sft, sides)
    if span * log2a > state_cap_bits:
        raise CapExceededError(
            f"frontier window of {span} cells exceeds the {state_cap_bits}-bit state cap")

    alphabet = range(sft.alphabet)
    memo: dict[tuple[int, tuple[int, ...]], int] = {}

    def suffix_count(k: int, window: tuple[int, ...]) -> int:
        if k == cells:
            return 1
        key = (k, window)
        cached = memo.get(key)
        if cached is not None:
            return cached
        total = 0
        for s in alphabet:
            completed_forbidden = False
            for deltas, symbols in checks[k]:
                match = True
                for dlt, sym in zip(deltas, symbols):
                    cur = s if dlt == 0 else window[dlt]
                    if cur != sym:
                        match = False
                        break
                if match:
                    completed_forbidden = True
                    break
            if not completed_forbidden:
                nxt = (window + (s,))[-span:] if span else ()
                total += suffix_count(k + 1, nxt)
        memo[key] = total
        return total

    return PatternCount(sides=sides, count=suffix_count(0, ()))


@functools.lru_cache(maxsize=None)
def _count_cached(sft: SftSpec, sides: tuple[int, ...],
                  cell_cap_bits: float, state_cap_bits: float) -> int:
    return count_patterns(sft, sides, cell_cap_bits=cell_cap_bits,
                          state_cap_bits=state_cap_bits).count


def log_complexity(sft: SftSpec, sides: Sequence[int], *,
                   cell_cap_bits: float = DEFAULT_CELL_CAP_BITS,
                   state_cap_bits: float = DEFAULT_STATE_CAP_BITS) -> float:
    """log base alphabet of the pattern count; -inf signals an empty count."""
    sides = _validate_sides(sft, sides)
    count = _count_cached(sft, sides, cell_cap_bits, state_cap_bits)
    if count == 0:
        return -math.inf
    return math.log(count) / math.log(sft.alphabet)


# ---------------------------------------------------------------------------
# Independent one-dimensional counter (transfer-style dynamic programming)
# ---------------------------------------------------------------------------

def _window_1d(sft: SftSpec) -> int:
    if sft.dim != 1:
        raise DomainError("the transfer counter only handles one-dimensional subshifts")
    if not sft.forbidden:
        return 1
    w = max(pat.extent(0) for pat in sft.forbidden)
    if w > MAX_PATTERN_SIDE:
        raise DomainError(f"window {w} exceeds the {MAX_PATTERN_SIDE}-cell memory cap")
    return w


def _word_patterns_1d(sft: SftSpec) -> list[tuple[int, dict[int, int]]]:
    """Each pattern as (length, {position from word start: symbol})."""
    out = []
    for pat in sft.forbidden:
        lo = min(off[0] for off in pat.offsets)
        length = pat.extent(0)
        cells = {off[0] - lo: sym for off, sym in zip(pat.offsets, pat.symbols)}
        out.append((length, cells))
    return out


def _ends_forbidden(word: tuple[int, ...], patterns: list[tuple[int, dict[int, int]]]) -> bool:
    """Does some forbidden translate end exactly at the last cell of word?"""
    n = len(word)
    for length, cells in patterns:
        if length > n:
            continue
        start = n - length
        if all(word[start + pos] == sym for pos, sym in cells.items()):
            return True
    return False


def transfer_matrix_count_1d(sft: SftSpec, n: int) -> int:
    """Count admissible length-n words by window dynamic programming.

    Independent of the depth-first enumerator: states are the trailing
    w-1 symbols and each extension checks only the translates ending at
    the new cell.  Must agree with count_patterns exactly.
    """
    if n < 1:
        raise DomainError(f"length must be >= 1, got {n!r}")
    w = _window_1d(sft)
    patterns = _word_patterns_1d(sft)
    keep = max(w - 1, 0)
    counts: dict[tuple[int, ...], int] = {(): 1}
    for _ in range(n):
        new: dict[tuple[int, ...], int] = {}
        for suffix, c in counts.items():
            for s in range(sft.alphabet):
                word = suffix + (s,)
                if _ends_forbidden(word, patterns):
                    continue
                nxt = word[-keep:] if keep else ()
                new[nxt] = new.get(nxt, 0) + c
        counts = new
    return sum(counts.values())


def transfer_matrix_1d(sft: SftSpec) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """States (admissible windows of w-1 symbols) and 0/1 transition matrix."""
    w = _window_1d(sft)
    patterns = _word_patterns_1d(sft)
    if w == 1:
        allowed = [s for s in range(sft.alphabet)
                   if not _ends_forbidden((s,), patterns)]
        return [()], np.array([[float(len(allowed))]])

    states: list[tuple[int, ...]] = []
    for word in itertools.product(range(sft.alphabet), repeat=w - 1):
        if any(_ends_forbidden(word[: i + 1], patterns) for i in range(w - 1)):
            continue
        states.append(word)
    index = {s: i for i, s in enumerate(states)}
    matrix = np.zeros((len(states), len(states)))
    for u in states:
        for s in range(sft.alphabet):
            word = u + (s,)
            if _ends_forbidden(word, patterns):
                continue
            v = word[1:]
            if v in index:
                matrix[index[u], index[v]] = 1.0
    return states, matrix


def dominant_eigenvalue(matrix: np.ndarray, *, iterations: int = 1000) -> float:
    """Dominant eigenvalue by plain power iteration from the all-ones vector."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DomainError("power iteration needs a nonempty square matrix")
    v = np.ones(m.shape[0])
    rayleigh = 0.0
    for _ in range(iterations):
        mv = m @ v
        norm = float(np.linalg.norm(mv))
        if norm == 0.0:
            return 0.0
        rayleigh = float(v @ mv) / float(v @ v)
        v = mv / norm
    return rayleigh


# ---------------------------------------------------------------------------
# Entropy brackets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntropyEntry:
    sides: tuple[int, ...]
    count: int
    log_value: float
    ratio: float
    running_min: float


@dataclass(frozen=True)
class EntropyBracket:
    """Upper bounds log_a(count)/volume along growing cubes.

    best_upper certifies the entropy from above (the log-count is
    componentwise subadditive, so every ratio dominates the limit).
    transfer_value_1d, present for one-dimensional subshifts, is the
    log of the window transfer matrix's dominant eigenvalue computed by
    power iteration; it is a benchmark, not part of the bound.
    """

    entries: tuple[EntropyEntry, ...]
    best_upper: float
    admissibility: str
    truncated: bool
    transfer_value_1d: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "best_upper": self.best_upper,
            "admissibility": self.admissibility,
            "truncated": self.truncated,
            "transfer_value_1d": self.transfer_value_1d,
            "entries": [
                {"sides": list(e.sides), "count": str(e.count),
                 "log_value": e.log_value, "ratio": e.ratio,
                 "running_min": e.running_min}
                for e in self.entries
            ],
        }

    def to_csv_rows(self) -> list[list[str]]:
        if not self.entries:
            return []
        d = len(self.entries[0].sides)
        header = [f"n{i + 1}" for i in range(d)]
        header += ["count", "log_complexity", "ratio", "running_min"]
        rows = [header]
        for e in self.entries:
            rows.append([str(n) for n in e.sides]
                        + [str(e.count), repr(e.log_value), repr(e.ratio),
                           repr(e.running_min)])
        return rows


def entropy_bounds(sft: SftSpec, max_side: int, *,
                   cell_cap_bits: float = DEFAULT_CELL_CAP_BITS,
                   state_cap_bits: float = DEFAULT_STATE_CAP_BITS) -> EntropyBracket:
    """Certified upper bounds for the entropy along cubes n = 1..max_side.

    A cap hit truncates the bracket instead of failing it: the bounds
    already collected stay valid upper bounds.
    """
    if max_side < 1:
        raise DomainError(f"max_side must be >= 1, got {max_side!r}")
    entries: list[EntropyEntry] = []
    running = math.inf
    truncated = False
    for n in range(1, max_side + 1):
        sides = (n,) * sft.dim
        try:
            count = _count_cached(sft, sides, cell_cap_bits, state_cap_bits)
        except CapExceededError:
            truncated = True
            break
        log_value = -math.inf if count == 0 else math.log(count) / math.log(sft.alphabet)
        ratio = log_value / n ** sft.dim
        running = min(running, ratio)
        entries.append(EntropyEntry(sides=sides, count=count, log_value=log_value,
                                    ratio=ratio, running_min=running))
    if not entries:
        raise CapExceededError("even the unit box exceeds the configured caps")
    transfer_value = None
    if sft.dim == 1:
        _, matrix = transfer_matrix_1d(sft)
        lam = dominant_eigenvalue(matrix)
        transfer_value = (math.log(lam) / math.log(sft.alphabet)) if lam > 0 else -math.inf
    return EntropyBracket(entries=tuple(entries), best_upper=running,
                          admissibility="locally_admissible", truncated=truncated,
                          transfer_value_1d=transfer_value)


def check_count_submultiplicativity(sft: SftSpec, side_cap: int, *,
                                    cell_cap_bits: float = DEFAULT_CELL_CAP_BITS,
                                    state_cap_bits: float = DEFAULT_STATE_CAP_BITS,
                                    ) -> ViolationReport:
    """Exact integer check of count(.., p+q, ..) <= count(.., p, ..) * count(.., q, ..).

    Runs over every box with all sides <= side_cap and every split of
    every axis.  Violations are reported with log-alphabet values so the
    record stays finite even for astronomically large counts; the
    comparison itself is exact integer arithmetic.
    """
    if side_cap < 2:
        raise DomainError("side_cap must be >= 2 to admit a split")
    loga = math.log(sft.alphabet)

    def count(sides: tuple[int, ...]) -> int:
        return _count_cached(sft, sides, cell_cap_bits, state_cap_bits)

    violations: list[Violation] = []
    checked = 0
    for sides in itertools.product(range(1, side_cap + 1), repeat=sft.dim):
        for axis in range(sft.dim):
            n = sides[axis]
            for p in range(1, n):
                q = n - p
                left = tuple(p if i == axis else s for i, s in enumerate(sides))
                right = tuple(q if i == axis else s for i, s in enumerate(sides))
                checked += 1
                whole, cl, cr = count(sides), count(left), count(right)
                if whole > cl * cr:
                    lhs = math.log(whole) / loga if whole else -math.inf
                    rhs = (math.log(cl * cr) / loga) if cl * cr else -math.inf
                    violations.append(Violation(kind="componentwise", axis=axis,
                                                witness=(left, right),
                                                lhs=lhs, rhs=rhs))
    label = f"pattern_count(a={sft.alphabet},d={sft.dim})"
    return ViolationReport(kind="componentwise", oracle=label,
                           violations=tuple(violations), samples_checked=checked,
                           metadata={"side_cap": side_cap, "exact": True})


def folner_box_ratio(sft: SftSpec, boxes: Iterable[Sequence[int]], *,
                     cell_cap_bits: float = DEFAULT_CELL_CAP_BITS,
                     state_cap_bits: float = DEFAULT_STATE_CAP_BITS,
                     ) -> list[tuple[tuple[int, ...], float]]:
    """Ratios log_a(count)/volume over an explicit box sequence.

    Boxes of the lattice form a Folner net, so the normalized log-counts
    along any exhausting box sequence head to the same entropy value as
    the cube schedule; this just evaluates the ratios for inspection.
    """
    out: list[tuple[tuple[int, ...], float]] = []
    for box in boxes:
        sides = _validate_sides(sft, box)
        count = _count_cached(sft, sides, cell_cap_bits, state_cap_bits)
        log_value = -math.inf if count == 0 else math.log(count) / math.log(sft.alphabet)
        out.append((sides, log_value / math.prod(sides)))
    return out


# ---------------------------------------------------------------------------
# Fixtures and serialization
# ---------------------------------------------------------------------------

def builtin_sft(name: str, *, alphabet: int = 2, dim: int = 2) -> SftSpec:
    """Built-in subshift fixtures: full_shift, golden_mean_1d, hard_square_2d."""
    if name == "full_shift":
        return SftSpec(alphabet=alphabet, dim=dim, forbidden=())
    if name == "golden_mean_1d":
        return SftSpec(alphabet=2, dim=1, forbidden=(
            ForbiddenPattern(offsets=((0,), (1,)), symbols=(1, 1)),
        ))
    if name == "hard_square_2d":
        return SftSpec(alphabet=2, dim=2, forbidden=(
            ForbiddenPattern(offsets=((0, 0), (0, 1)), symbols=(1, 1)),
            ForbiddenPattern(offsets=((0, 0), (1, 0)), symbols=(1, 1)),
        ))
    raise ConfigError(
        f"unknown subshift fixture {name!r}; available: full_shift, golden_mean_1d, "
        "hard_square_2d")


def builtin_sft_names() -> tuple[str, ...]:
    return ("full_shift", "golden_mean_1d", "hard_square_2d")


def sft_to_json_dict(sft: SftSpec) -> dict:
    return {
        "alphabet": sft.alphabet,
        "dim": sft.dim,
        "forbidden": [
            {"offsets": [list(off) for off in pat.offsets],
             "symbols": list(pat.symbols)}
            for pat in sft.forbidden
        ],
    }


def load_sft_spec(path: str | Path) -> SftSpec:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
        alphabet = int(obj["alphabet"])
        dim = int(obj["dim"])
        forbidden = tuple(
            ForbiddenPattern(
                offsets=tuple(tuple(int(c) for c in off) for off in entry["offsets"]),
                symbols=tuple(int(s) for s in entry["symbols"]),
            )
            for entry in obj.get("forbidden", [])
        )
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"cannot read subshift spec from {path}: {exc}") from exc
    return SftSpec(alphabet=alphabet, dim=dim, forbidden=forbidden)


def relabel(sft: SftSpec, permutation: Sequence[int]) -> SftSpec:
    """Apply an alphabet permutation consistently to all forbidden patterns."""
    perm = tuple(int(p) for p in permutation)
    if sorted(perm) != list(range(sft.alphabet)):
        raise DomainError(f"{perm!r} is not a permutation of 0..{sft.alphabet - 1}")
    forbidden = tuple(
        ForbiddenPattern(offsets=pat.offsets,
                         symbols=tuple(perm[s] for s in pat.symbols))
        for pat in sft.forbidden
    )
    return SftSpec(alphabet=sft.alphabet, dim=sft.dim, forbidden=forbidden)

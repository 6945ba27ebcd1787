"""Deterministic counter-based sample streams.

Sample j is a pure function of (seed, j): there is no generator state to
advance, so identical budgets reproduce identical streams regardless of
evaluation order, chunking, or platform.  The mixer is the standard
splitmix64 finalizer over a Weyl sequence, which is cheap, well
distributed, and trivially portable across languages.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domain import DomainError

__all__ = ["raw64", "unit_uniform", "uniform_in", "integer_in", "SampleBudget"]

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def raw64(seed: int, counter: int) -> int:
    """The counter-th 64-bit word of the stream for this seed."""
    z = (seed + (counter + 1) * _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def unit_uniform(seed: int, counter: int) -> float:
    """Uniform float in [0, 1) with 53 random bits."""
    return (raw64(seed, counter) >> 11) * 2.0 ** -53


def uniform_in(seed: int, counter: int, lo: float, hi: float) -> float:
    if not lo < hi:
        raise DomainError(f"empty sampling range [{lo!r}, {hi!r})")
    return lo + unit_uniform(seed, counter) * (hi - lo)


def integer_in(seed: int, counter: int, lo: int, hi: int) -> int:
    """Uniform integer in the inclusive range [lo, hi]."""
    if lo > hi:
        raise DomainError(f"empty integer range [{lo}, {hi}]")
    span = hi - lo + 1
    return lo + raw64(seed, counter) % span


@dataclass(frozen=True)
class SampleBudget:
    """Reproducible sampling budget: (seed, count, ranges) fixes the stream.

    ranges gives one (lo, hi) pair per axis; None lets the consumer pick
    the default for the domain at hand (0.1..100 per positive axis).
    """

    count: int = 10_000
    seed: int = 2024
    ranges: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        if self.count < 1:
            raise DomainError(f"sample count must be positive, got {self.count!r}")
        if self.ranges is not None:
            ranges = tuple((float(lo), float(hi)) for lo, hi in self.ranges)
            for lo, hi in ranges:
                if not lo < hi:
                    raise DomainError(f"bad sampling range [{lo!r}, {hi!r})")
            object.__setattr__(self, "ranges", ranges)

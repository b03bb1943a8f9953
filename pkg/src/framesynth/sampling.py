"""Seeded pseudo-random sampling primitives.

Every random decision in this package flows through :class:`Prng`, a
SplitMix64 generator (Steele, Lea & Flatt, "Fast splittable pseudorandom
number generators", OOPSLA 2014). The algorithm is fixed here on purpose:
the platform default generator is never used, so a seed pins the output
bytes of an entire pipeline run. Uniform floats are built from the top
53 bits of each 64-bit word, which keeps categorical boundaries identical
on every platform this package runs on.
"""

from __future__ import annotations

import hashlib
from typing import TYPE_CHECKING, Sequence, TypeVar

if TYPE_CHECKING:
    from .ruleset import DiscreteDistribution

T = TypeVar("T")

_MASK64 = (1 << 64) - 1
# SplitMix64 constants, verbatim from the published reference implementation.
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class EmptyDistributionError(ValueError):
    """Raised when a draw is requested from a distribution with no entries."""


class Prng:
    """SplitMix64 generator with deterministic child derivation.

    ``seed`` is kept verbatim so children can be derived from the original
    seed regardless of how far the state has advanced. Child generators are
    seeded with ``blake2b(seed_le64 || "/" || tag)``, so unrelated pipeline
    stages own independent streams and reordering one stage never perturbs
    another's draws.
    """

    __slots__ = ("seed", "state")

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= _MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits of one output word."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randbelow(self, n: int) -> int:
        """Integer in [0, n) via the 53-bit uniform (bias < 2**-52, deterministic)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return min(int(self.uniform() * n), n - 1)

    def derive(self, tag: str) -> "Prng":
        """Child generator keyed by (original seed, tag)."""
        digest = hashlib.blake2b(
            self.seed.to_bytes(8, "little") + b"/" + tag.encode("utf-8"),
            digest_size=8,
        ).digest()
        return Prng(int.from_bytes(digest, "little"))

    def shuffle(self, items: list[T]) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]


def sample_indices(n: int, k: int, rng: Prng) -> list[int]:
    """Ordered uniform sample of k distinct indices from range(n).

    Partial Fisher-Yates: the returned order is itself a seeded shuffle of
    the chosen indices.
    """
    if k < 0 or k > n:
        raise ValueError(f"cannot sample {k} from {n} rows")
    idx = list(range(n))
    for i in range(k):
        j = i + rng.randbelow(n - i)
        idx[i], idx[j] = idx[j], idx[i]
    return idx[:k]


def draw_categorical(dist: "DiscreteDistribution", rng: Prng):
    """Draw one support value from a percent-weighted distribution.

    Selection is a cumulative-percent scan over entries in document order
    against a single uniform variate in [0, 100); rulesets therefore control
    boundary layout explicitly. Falls back to the final entry if accumulated
    rounding leaves the variate past the last boundary.
    """
    entries = dist.entries
    if not entries:
        raise EmptyDistributionError("cannot draw from an empty distribution")
    u = rng.uniform() * 100.0
    acc = 0.0
    for value, percent in entries:
        acc += percent
        if u < acc:
            return value
    return entries[-1][0]


def draw_bernoulli(p: float, rng: Prng) -> int:
    """1 with probability p, else 0. p=0 and p=1 are exact."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"bernoulli probability {p} outside [0, 1]")
    return 1 if rng.uniform() < p else 0


def draw_rssi(rule: "DiscreteDistribution", rng: Prng) -> int:
    """Draw a signal-strength value (dBm); the support must be all-negative."""
    if not rule.entries:
        raise EmptyDistributionError("empty signal-strength distribution")
    for value, _ in rule.entries:
        if not isinstance(value, int) or value >= 0:
            raise ValueError(f"signal-strength support must be negative dBm integers, got {value}")
    return draw_categorical(rule, rng)

"""Logical clocks for causality testing.

Two timestamp families live here.  The vector clock keeps one counter per
process and characterises Lamport's happened-before relation exactly, so it
serves as the ground-truth oracle.  The Bloom clock keeps ``m`` counters
(typically ``m < n``) and updates them through ``k`` hash-derived increments
per event plus pointwise-max merges, trading exactness for space: its
dominance test never misses a true causal pair but may report false
positives.

Clock values are immutable snapshots; every operation returns a new value,
so snapshots can be stored in event logs and shared freely across threads.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from hashlib import blake2b

from .errors import ConfigurationError

ProcessId = int
EventIndex = int


@dataclass(frozen=True)
class HashFamily:
    """``k`` hash functions over (process id, event index), each mapping into [0, m).

    Indices come from the double-hashing construction ``(h1 + i*h2) mod m``
    where ``h1`` and ``h2`` are the two halves of a keyed blake2b digest of
    the pair and ``h2`` is forced odd.  The derivation is a pure function of
    ``(seed, pid, x)``: identical inputs always yield identical index
    sequences, which is what makes whole simulations reproducible.
    """

    k: int
    m: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ConfigurationError(f"need at least one hash function, got k={self.k}")
        if self.m < 1:
            raise ConfigurationError(f"clock width must be at least 1, got m={self.m}")

    def indices(self, pid: ProcessId, x: EventIndex) -> tuple[int, ...]:
        """Return the ``k`` counter indices to increment for event ``x`` at ``pid``.

        Duplicates are possible and deliberate: a doubly-hit index is
        incremented twice, so one tick always adds exactly ``k`` to the
        counter sum.
        """
        key = (self.seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little")
        digest = blake2b(struct.pack("<qq", pid, x), digest_size=16, key=key).digest()
        h1 = int.from_bytes(digest[:8], "little")
        h2 = int.from_bytes(digest[8:], "little") | 1
        m = self.m
        return tuple((h1 + i * h2) % m for i in range(self.k))


@dataclass(frozen=True)
class BloomClock:
    """Width-``m`` counting timestamp: the probabilistic causality clock.

    ``leq`` implements the causality test: ``B_y.leq(B_z)`` declares
    ``y -> z``.  The declaration is complete (no false negatives) but not
    sound (concurrent events may still satisfy it).
    """

    counters: tuple[int, ...]

    @classmethod
    def zero(cls, m: int) -> BloomClock:
        if m < 1:
            raise ConfigurationError(f"clock width must be at least 1, got m={m}")
        return cls((0,) * m)

    @property
    def width(self) -> int:
        return len(self.counters)

    @property
    def total(self) -> int:
        """Sum of all counters; grows by exactly ``k`` per tick."""
        return sum(self.counters)

    def _check_width(self, other: BloomClock) -> None:
        if len(self.counters) != len(other.counters):
            raise ConfigurationError(
                f"clock width mismatch: {len(self.counters)} vs {len(other.counters)}"
            )

    def tick(self, family: HashFamily, pid: ProcessId, x: EventIndex) -> BloomClock:
        """Apply the local tick for event ``x`` at ``pid``: increment the k derived indices."""
        if family.m != len(self.counters):
            raise ConfigurationError(
                f"clock width mismatch: family maps into [0, {family.m}), clock has {len(self.counters)}"
            )
        counters = list(self.counters)
        for i in family.indices(pid, x):
            counters[i] += 1
        return BloomClock(tuple(counters))

    def merge(self, other: BloomClock) -> BloomClock:
        """Pointwise maximum, as executed before the tick at a receive event."""
        self._check_width(other)
        return BloomClock(tuple(map(max, self.counters, other.counters)))

    def leq(self, other: BloomClock) -> bool:
        """True when every counter of ``self`` is <= the matching counter of ``other``."""
        self._check_width(other)
        return all(a <= b for a, b in zip(self.counters, other.counters))


@dataclass(frozen=True)
class VectorClock:
    """Width-``n`` exact timestamp: ``V_y < V_z`` iff ``y`` happened before ``z``."""

    counters: tuple[int, ...]

    @classmethod
    def zero(cls, n: int) -> VectorClock:
        if n < 1:
            raise ConfigurationError(f"vector clock needs at least 1 component, got n={n}")
        return cls((0,) * n)

    @property
    def width(self) -> int:
        return len(self.counters)

    def _check_width(self, other: VectorClock) -> None:
        if len(self.counters) != len(other.counters):
            raise ConfigurationError(
                f"clock width mismatch: {len(self.counters)} vs {len(other.counters)}"
            )

    def tick(self, pid: ProcessId) -> VectorClock:
        """Increment the owning process's component by one."""
        if not 0 <= pid < len(self.counters):
            raise ConfigurationError(f"process id {pid} outside [0, {len(self.counters)})")
        counters = list(self.counters)
        counters[pid] += 1
        return VectorClock(tuple(counters))

    def merge(self, other: VectorClock) -> VectorClock:
        """Pointwise maximum, as executed before the tick at a receive event."""
        self._check_width(other)
        return VectorClock(tuple(map(max, self.counters, other.counters)))

    def leq(self, other: VectorClock) -> bool:
        self._check_width(other)
        return all(a <= b for a, b in zip(self.counters, other.counters))

    def happened_before(self, other: VectorClock) -> bool:
        """Strict componentwise order: ``self <= other`` and ``self != other``."""
        return self.leq(other) and self.counters != other.counters

    def concurrent_with(self, other: VectorClock) -> bool:
        return not self.leq(other) and not other.leq(self)

"""Mergeable sketches: Bloom filter, count-min sketch and HyperLogLog.

All three are immutable values; ``add``-style methods return a new sketch.
Merging requires identical parameters, including the hash seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import IncompatibleSketchError
from .hashing import as_bytes, hash64
from .monoid import Monoid


def _require_same(kind: str, a, b, fields: tuple[str, ...]) -> None:
    for f in fields:
        if getattr(a, f) != getattr(b, f):
            raise IncompatibleSketchError(
                f"cannot merge {kind}s with different {f}: "
                f"{getattr(a, f)} != {getattr(b, f)}"
            )


# Bloom filter


@dataclass(frozen=True, slots=True)
class BloomFilter:
    m_bits: int
    k: int
    hash_seed: int = 0
    bits: bytes = b""

    def __post_init__(self):
        if self.m_bits < 1 or self.k < 1:
            raise ValueError("m_bits and k must be positive")
        n_bytes = (self.m_bits + 7) // 8
        if not self.bits:
            object.__setattr__(self, "bits", bytes(n_bytes))
        elif len(self.bits) != n_bytes:
            raise ValueError(f"expected {n_bytes} bytes of bits, got {len(self.bits)}")
        elif self.m_bits % 8 and self.bits[-1] >> (self.m_bits % 8):
            raise ValueError("bits set beyond m_bits")

    @classmethod
    def empty(cls, m_bits: int, k: int, hash_seed: int = 0) -> BloomFilter:
        return cls(m_bits, k, hash_seed)

    def positions(self, item) -> list[int]:
        data = as_bytes(item)
        return [hash64(data, self.hash_seed, i) % self.m_bits for i in range(self.k)]

    def add(self, item) -> BloomFilter:
        return self.add_all([item])

    def add_all(self, items: Iterable) -> BloomFilter:
        buf = bytearray(self.bits)
        for item in items:
            for pos in self.positions(item):
                buf[pos >> 3] |= 1 << (pos & 7)
        return BloomFilter(self.m_bits, self.k, self.hash_seed, bytes(buf))

    def contains(self, item) -> bool:
        bits = self.bits
        return all(bits[pos >> 3] >> (pos & 7) & 1 for pos in self.positions(item))

    __contains__ = contains

    def union(self, other: BloomFilter) -> BloomFilter:
        _require_same("Bloom filter", self, other, ("m_bits", "k", "hash_seed"))
        n = len(self.bits)
        merged = int.from_bytes(self.bits, "little") | int.from_bytes(other.bits, "little")
        return BloomFilter(self.m_bits, self.k, self.hash_seed, merged.to_bytes(n, "little"))

    def popcount(self) -> int:
        return bin(int.from_bytes(self.bits, "little")).count("1")


def bloom_add(f: BloomFilter, item) -> BloomFilter:
    return f.add(item)


def bloom_contains(f: BloomFilter, item) -> bool:
    return f.contains(item)


def bloom_union(a: BloomFilter, b: BloomFilter) -> BloomFilter:
    return a.union(b)


def bloom_monoid(m_bits: int, k: int, hash_seed: int = 0) -> Monoid:
    return Monoid(
        f"bloom(m_bits={m_bits},k={k},seed={hash_seed})",
        BloomFilter.empty(m_bits, k, hash_seed),
        bloom_union,
        commutative=True,
        carrier=BloomFilter,
    )


# Count-min sketch


@dataclass(frozen=True, slots=True)
class CountMinSketch:
    """``d`` rows of ``w`` counters, stored row-major in ``counters``."""

    d: int
    w: int
    hash_seed: int = 0
    counters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.d < 1 or self.w < 1:
            raise ValueError("d and w must be positive")
        if not self.counters:
            object.__setattr__(self, "counters", (0,) * (self.d * self.w))
        elif len(self.counters) != self.d * self.w:
            raise ValueError(f"expected {self.d * self.w} counters, got {len(self.counters)}")
        elif min(self.counters) < 0:
            raise ValueError("counters must be non-negative")

    @classmethod
    def empty(cls, d: int, w: int, hash_seed: int = 0) -> CountMinSketch:
        return cls(d, w, hash_seed)

    def cells(self, item) -> list[int]:
        """Flat counter index for ``item`` in each row."""
        data = as_bytes(item)
        w = self.w
        return [row * w + hash64(data, self.hash_seed, row) % w for row in range(self.d)]

    def add(self, item, delta: int = 1) -> CountMinSketch:
        return self.add_all([(item, delta)])

    def add_all(self, updates: Iterable) -> CountMinSketch:
        """Apply many updates at once; each update is an item or ``(item, delta)``."""
        buf = list(self.counters)
        for u in updates:
            item, delta = u if isinstance(u, tuple) else (u, 1)
            if not isinstance(delta, int) or delta < 1:
                raise ValueError(f"delta must be a positive int, got {delta!r}")
            for cell in self.cells(item):
                buf[cell] += delta
        return CountMinSketch(self.d, self.w, self.hash_seed, tuple(buf))

    def estimate(self, item) -> int:
        counters = self.counters
        return min(counters[c] for c in self.cells(item))

    def merge(self, other: CountMinSketch) -> CountMinSketch:
        _require_same("count-min sketch", self, other, ("d", "w", "hash_seed"))
        return CountMinSketch(
            self.d, self.w, self.hash_seed, tuple(map(int.__add__, self.counters, other.counters))
        )

    def row(self, i: int) -> tuple[int, ...]:
        return self.counters[i * self.w:(i + 1) * self.w]

    def total(self) -> int:
        return sum(self.row(0))


def cms_add(s: CountMinSketch, item, delta: int = 1) -> CountMinSketch:
    return s.add(item, delta)


def cms_estimate(s: CountMinSketch, item) -> int:
    return s.estimate(item)


def cms_merge(a: CountMinSketch, b: CountMinSketch) -> CountMinSketch:
    return a.merge(b)


def cms_monoid(d: int, w: int, hash_seed: int = 0) -> Monoid:
    return Monoid(
        f"cms(d={d},w={w},seed={hash_seed})",
        CountMinSketch.empty(d, w, hash_seed),
        cms_merge,
        commutative=True,
        carrier=CountMinSketch,
    )


# HyperLogLog


def _alpha(m: int) -> float:
    if m == 16:
        return 0.673
    if m == 32:
        return 0.697
    if m == 64:
        return 0.709
    return 0.7213 / (1 + 1.079 / m)


@dataclass(frozen=True, slots=True)
class HyperLogLog:
    """``2**p`` registers, one byte each, holding the maximum observed rank."""

    p: int
    hash_seed: int = 0
    registers: bytes = b""

    MIN_P = 4
    MAX_P = 16

    def __post_init__(self):
        if not self.MIN_P <= self.p <= self.MAX_P:
            raise ValueError(f"precision must be in [{self.MIN_P}, {self.MAX_P}], got {self.p}")
        m = 1 << self.p
        if not self.registers:
            object.__setattr__(self, "registers", bytes(m))
        elif len(self.registers) != m:
            raise ValueError(f"expected {m} registers, got {len(self.registers)}")
        elif max(self.registers) > 65 - self.p:
            raise ValueError("register value exceeds the maximum possible rank")

    @classmethod
    def empty(cls, p: int, hash_seed: int = 0) -> HyperLogLog:
        return cls(p, hash_seed)

    @property
    def m(self) -> int:
        return 1 << self.p

    def index_and_rank(self, item) -> tuple[int, int]:
        h = hash64(as_bytes(item), self.hash_seed)
        q = 64 - self.p
        index = h >> q
        rest = h & ((1 << q) - 1)
        # leading zeros of the q-bit remainder, plus one
        return index, q - rest.bit_length() + 1

    def add(self, item) -> HyperLogLog:
        return self.add_all([item])

    def add_all(self, items: Iterable) -> HyperLogLog:
        regs = bytearray(self.registers)
        for item in items:
            i, rank = self.index_and_rank(item)
            if rank > regs[i]:
                regs[i] = rank
        return HyperLogLog(self.p, self.hash_seed, bytes(regs))

    def merge(self, other: HyperLogLog) -> HyperLogLog:
        _require_same("HyperLogLog", self, other, ("p", "hash_seed"))
        return HyperLogLog(self.p, self.hash_seed, bytes(map(max, self.registers, other.registers)))

    def raw_estimate(self) -> float:
        m = self.m
        return _alpha(m) * m * m / math.fsum(2.0 ** -r for r in self.registers)

    def estimate(self) -> int:
        m = self.m
        e = self.raw_estimate()
        zeros = self.registers.count(0)
        if e <= 2.5 * m and zeros:
            e = m * math.log(m / zeros)
        return int(round(e))


def hll_add(h: HyperLogLog, item) -> HyperLogLog:
    return h.add(item)


def hll_merge(a: HyperLogLog, b: HyperLogLog) -> HyperLogLog:
    return a.merge(b)


def hll_estimate(h: HyperLogLog) -> int:
    return h.estimate()


def hll_monoid(p: int, hash_seed: int = 0) -> Monoid:
    return Monoid(
        f"hll(p={p},seed={hash_seed})",
        HyperLogLog.empty(p, hash_seed),
        hll_merge,
        commutative=True,
        carrier=HyperLogLog,
    )

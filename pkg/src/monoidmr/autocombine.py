"""Combiners and in-mapper combining derived from a declared monoid."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Any, Callable

from .encoding import key_bytes
from .errors import UnsupportedMonoidError
from .monoid import Monoid
from .records import Combiner, MapFn, Record


def _require_commutative(m: Monoid) -> None:
    # reduce groups carry no value-order guarantee
    if not m.commutative:
        raise UnsupportedMonoidError(
            f"monoid {m.name!r} is not commutative; automatic combining "
            "requires a commutative monoid"
        )


def derive_combiner(m: Monoid) -> Combiner:
    """Build a combiner that folds each key's values with ``m``."""
    _require_commutative(m)

    def combine_group(key, values):
        return [Record(key, m.combine_all(values))]

    return Combiner(combine_group, m.carrier, m.carrier, derived=True)


@dataclass
class InMapperState:
    capacity: int | None
    table: dict[Any, Any] = field(default_factory=dict)
    flush_count: int = 0


class InMapperTask:
    """Map task that folds emissions in memory and emits them at close.

    When a new key arrives and the table already holds ``capacity`` keys,
    the entry with the largest key (UTF-8 byte order) is emitted and
    dropped first. Partial flushes are safe because the reducer folds
    them back together with the same monoid.
    """

    def __init__(self, map_fn: MapFn, monoid: Monoid, capacity: int | None):
        self.map_fn = map_fn
        self.monoid = monoid
        self.capacity = capacity
        self.state = InMapperState(capacity)

    def initialize(self) -> None:
        self.state = InMapperState(self.capacity)

    def map(self, key, value) -> list[Record]:
        m = self.monoid
        st = self.state
        table = st.table
        evicted = []
        for k, v in self.map_fn(key, value):
            if k in table:
                table[k] = m.combine(table[k], v)
                continue
            if st.capacity is not None and len(table) >= st.capacity:
                victim = max(table, key=key_bytes)
                evicted.append(Record(victim, table.pop(victim)))
                st.flush_count += 1
            table[k] = m.combine(m.identity, v)
        return evicted

    def close(self) -> list[Record]:
        table = self.state.table
        out = [Record(k, table[k]) for k in sorted(table, key=key_bytes)]
        table.clear()
        return out


def wrap_in_mapper(
    map_fn: MapFn, m: Monoid, capacity: int | None = None
) -> Callable[[], InMapperTask]:
    """Return a factory of in-mapper-combining tasks around ``map_fn``.

    ``capacity`` bounds the number of distinct keys held per task; ``None``
    means unbounded.
    """
    _require_commutative(m)
    if capacity is not None and capacity < 1:
        raise ValueError(f"capacity must be >= 1, got {capacity}")
    return functools.partial(InMapperTask, map_fn, m, capacity)

"""Concrete monoids: integer sum, (sum, count) pairs and term stripes."""

from __future__ import annotations

import operator
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import EmptyGroupError
from .monoid import Monoid

INT_SUM = Monoid("intsum", 0, operator.add, commutative=True, carrier=int)


def _check_int(name: str, value) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")


@dataclass(frozen=True, slots=True)
class SumCount:
    """A running sum together with the number of observations behind it."""

    sum: int
    cnt: int

    def __post_init__(self):
        _check_int("sum", self.sum)
        _check_int("cnt", self.cnt)
        if self.cnt < 0:
            raise ValueError(f"cnt must be non-negative, got {self.cnt}")
        if self.cnt == 0 and self.sum != 0:
            raise ValueError("a SumCount with no observations must have sum 0")

    def __add__(self, other: SumCount) -> SumCount:
        if not isinstance(other, SumCount):
            return NotImplemented
        return SumCount(self.sum + other.sum, self.cnt + other.cnt)

    def __iter__(self):
        yield self.sum
        yield self.cnt

    def __repr__(self) -> str:
        return f"SumCount({self.sum}, {self.cnt})"


SUM_COUNT = Monoid(
    "sumcount", SumCount(0, 0), operator.add, commutative=True, carrier=SumCount
)


def sum_count_make(r: int) -> SumCount:
    """A partial aggregate over a single observation ``r``."""
    return SumCount(r, 1)


def sum_count_finalize(sc: SumCount) -> Fraction:
    if sc.cnt == 0:
        raise EmptyGroupError("cannot take the mean of an empty group")
    return Fraction(sc.sum, sc.cnt)


class Stripe(Mapping):
    """Immutable term -> count map; zero counts are never stored.

    Keeping zeros out makes equality structural: two stripes are equal iff
    they assign the same positive count to the same terms.
    """

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping[str, int] | Iterable[tuple[str, int]] = (), **kw):
        items = dict(entries)
        items.update(kw)
        clean = {}
        for term, count in items.items():
            if not isinstance(term, str):
                raise TypeError(f"stripe terms must be str, got {type(term).__name__}")
            _check_int("stripe count", count)
            if count < 0:
                raise ValueError(f"negative count {count} for term {term!r}")
            if count:
                clean[term] = count
        self._entries = clean
        self._hash = None

    @classmethod
    def _trusted(cls, entries: dict[str, int]) -> Stripe:
        s = object.__new__(cls)
        s._entries = entries
        s._hash = None
        return s

    def __getitem__(self, term: str) -> int:
        return self._entries[term]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if isinstance(other, Stripe):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self == Stripe(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{t!r}: {c}" for t, c in self.sorted_items())
        return f"Stripe({{{body}}})"

    def sorted_items(self) -> list[tuple[str, int]]:
        """Entries ordered by the UTF-8 byte order of the term."""
        return sorted(self._entries.items(), key=lambda kv: kv[0].encode("utf-8"))


def stripe_sum(acc: Stripe, h: Stripe) -> Stripe:
    """Element-wise sum; a term missing on one side counts as zero."""
    if len(acc) < len(h):
        acc, h = h, acc
    out = dict(acc._entries)
    for term, count in h._entries.items():
        out[term] = out.get(term, 0) + count
    return Stripe._trusted(out)


STRIPE = Monoid("stripe", Stripe(), stripe_sum, commutative=True, carrier=Stripe)

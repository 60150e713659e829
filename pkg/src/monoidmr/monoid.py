"""The monoid abstraction and a seeded law checker."""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .errors import MonoidTypeError


@dataclass(frozen=True)
class Monoid:
    """An identity element plus an associative binary operation.

    ``carrier`` is the Python type every element must be an instance of;
    it is used both for operand checks and by the engine when matching
    declared intermediate value types. ``commutative`` is a claim that
    :func:`check_laws` verifies rather than assumes.
    """

    name: str
    identity: Any
    op: Callable[[Any, Any], Any]
    commutative: bool = True
    carrier: type | tuple[type, ...] | None = None

    def check_element(self, x: Any) -> None:
        if self.carrier is not None and not isinstance(x, self.carrier):
            raise MonoidTypeError(
                f"{self.name}: {x!r} is a {type(x).__name__}, "
                f"not an element of {_type_name(self.carrier)}"
            )

    def combine(self, a: Any, b: Any) -> Any:
        self.check_element(a)
        self.check_element(b)
        return self.op(a, b)

    def combine_all(self, xs: Iterable[Any]) -> Any:
        return functools.reduce(self.combine, xs, self.identity)


def _type_name(t) -> str:
    if isinstance(t, tuple):
        return " | ".join(x.__name__ for x in t)
    return t.__name__


def combine(m: Monoid, a: Any, b: Any) -> Any:
    return m.combine(a, b)


def combine_all(m: Monoid, xs: Iterable[Any]) -> Any:
    """Left fold of ``m.combine`` over ``xs`` starting from the identity."""
    return m.combine_all(xs)


@dataclass
class LawReport:
    monoid: str
    trials: int
    seed: int
    failures: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [
            f"monoid={self.monoid} trials={self.trials} seed={self.seed} "
            f"failures={len(self.failures)}"
        ]
        for law, elements in self.failures[:10]:
            lines.append(f"  {law}: {elements!r}")
        if len(self.failures) > 10:
            lines.append(f"  ... {len(self.failures) - 10} more")
        return "\n".join(lines)


def check_laws(
    m: Monoid,
    gen: Callable[[random.Random], Any],
    trials: int,
    seed: int,
) -> LawReport:
    """Sample ``trials`` element triples from ``gen`` and test the monoid laws.

    Every trial checks left and right identity on ``a``, associativity on
    ``(a, b, c)`` and, when ``m`` claims it, commutativity on ``(a, b)``.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = random.Random(seed)
    report = LawReport(monoid=m.name, trials=trials, seed=seed)
    fail = report.failures
    for _ in range(trials):
        a, b, c = gen(rng), gen(rng), gen(rng)
        if m.combine(m.identity, a) != a:
            fail.append(("left-identity", (a,)))
        if m.combine(a, m.identity) != a:
            fail.append(("right-identity", (a,)))
        if m.combine(m.combine(a, b), c) != m.combine(a, m.combine(b, c)):
            fail.append(("associativity", (a, b, c)))
        if m.commutative and m.combine(a, b) != m.combine(b, a):
            fail.append(("commutativity", (a, b)))
    return report

"""Seeded element generators for every catalog monoid, plus two fixtures.

``subtraction`` is deliberately not a monoid (it fails associativity and
left identity); ``concat`` is a lawful but non-commutative monoid.
"""

from __future__ import annotations

import operator
import random
from dataclasses import dataclass
from typing import Any, Callable

from .catalog import INT_SUM, STRIPE, SUM_COUNT, Stripe, SumCount
from .monoid import LawReport, Monoid, check_laws
from .sketches import bloom_monoid, cms_monoid, hll_monoid

SUBTRACTION = Monoid("subtraction", 0, operator.sub, commutative=False, carrier=int)
CONCAT = Monoid("concat", "", operator.add, commutative=False, carrier=str)

_TERMS = "abcdefgh"


def gen_int(rng: random.Random) -> int:
    return rng.randint(-10**6, 10**6)


def gen_sum_count(rng: random.Random) -> SumCount:
    cnt = rng.randint(0, 20)
    return SumCount(rng.randint(-1000, 1000) if cnt else 0, cnt)


def gen_stripe(rng: random.Random) -> Stripe:
    return Stripe({t: rng.randint(0, 5) for t in rng.sample(_TERMS, rng.randint(0, 5))})


def _items(rng: random.Random, most: int) -> list[str]:
    return [f"item-{rng.randrange(200)}" for _ in range(rng.randint(0, most))]


@dataclass(frozen=True)
class LawSubject:
    monoid: Monoid
    gen: Callable[[random.Random], Any]

    def check(self, trials: int, seed: int) -> LawReport:
        return check_laws(self.monoid, self.gen, trials, seed)


def _bloom_subject() -> LawSubject:
    m = bloom_monoid(m_bits=64, k=3, hash_seed=11)
    return LawSubject(m, lambda rng: m.identity.add_all(_items(rng, 6)))


def _cms_subject() -> LawSubject:
    m = cms_monoid(d=3, w=16, hash_seed=11)

    def gen(rng):
        return m.identity.add_all([(x, rng.randint(1, 3)) for x in _items(rng, 6)])

    return LawSubject(m, gen)


def _hll_subject() -> LawSubject:
    m = hll_monoid(p=6, hash_seed=11)
    return LawSubject(m, lambda rng: m.identity.add_all(_items(rng, 12)))


LAW_SUBJECTS: dict[str, Callable[[], LawSubject]] = {
    "intsum": lambda: LawSubject(INT_SUM, gen_int),
    "sumcount": lambda: LawSubject(SUM_COUNT, gen_sum_count),
    "stripe": lambda: LawSubject(STRIPE, gen_stripe),
    "bloom": _bloom_subject,
    "cms": _cms_subject,
    "hll": _hll_subject,
    # fixtures
    "subtraction": lambda: LawSubject(SUBTRACTION, lambda rng: rng.randint(-50, 50)),
    "concat": lambda: LawSubject(
        CONCAT, lambda rng: "".join(rng.choices(_TERMS, k=rng.randint(0, 4)))
    ),
}

CATALOG_NAMES = ("intsum", "sumcount", "stripe", "bloom", "cms", "hll")

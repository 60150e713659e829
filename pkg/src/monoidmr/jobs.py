"""Example jobs (grouped mean variants, word count, stripes, distinct count)
and brute-force single-machine oracles for each of them."""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .catalog import INT_SUM, STRIPE, SUM_COUNT, Stripe, SumCount, sum_count_finalize, sum_count_make
from .engine import JobSpec
from .errors import ConfigError
from .records import Combiner, Record
from .sketches import HyperLogLog, hll_monoid

DISTINCT_KEY = "distinct"


def tokenize(text: str) -> list[str]:
    return text.lower().split()


@dataclass(frozen=True)
class CorpusDocument:
    docid: int | str
    terms: tuple[str, ...]

    @classmethod
    def from_text(cls, docid, text: str) -> CorpusDocument:
        return cls(docid, tuple(tokenize(text)))


@dataclass(frozen=True)
class CooccurrenceConfig:
    """``window`` is the maximum token distance; ``direction`` is
    ``"symmetric"`` or ``"following"`` (bigram-style, not symmetric)."""

    window: int = 2
    direction: str = "symmetric"
    coalesce: bool = False

    def __post_init__(self):
        if self.window < 1:
            raise ConfigError(f"window must be >= 1, got {self.window}")
        if self.direction not in ("symmetric", "following"):
            raise ConfigError(f"unknown direction {self.direction!r}")


def neighbors(terms: Sequence[str], i: int, cfg: CooccurrenceConfig) -> list[str]:
    """Tokens within ``cfg.window`` positions of ``i`` in the same document.

    Repeated tokens are returned once per occurrence.
    """
    if not 0 <= i < len(terms):
        raise IndexError(f"token index {i} out of range for {len(terms)} tokens")
    lo = i + 1 if cfg.direction == "following" else max(0, i - cfg.window)
    hi = min(len(terms), i + cfg.window + 1)
    return [terms[j] for j in range(lo, hi) if j != i]


# Grouped mean


def _mean_naive_reduce(key, values):
    total = 0
    cnt = 0
    for r in values:
        total += r
        cnt += 1
    yield key, Fraction(total, cnt)


def job_mean_naive() -> JobSpec:
    """Mapper passes values through; the reducer averages. No combiner is
    possible because a mean of partial means is not the overall mean."""
    return JobSpec(
        name="mean_naive",
        mapper=lambda t, r: [(t, r)],
        reducer=_mean_naive_reduce,
        map_output_type=int,
    )


def _broken_combine(key, values):
    total = 0
    cnt = 0
    for r in values:
        total += r
        cnt += 1
    yield key, SumCount(total, cnt)


def _pair_mean_reduce(key, values):
    total = 0
    cnt = 0
    for s, c in values:
        total += s
        cnt += c
    yield key, sum_count_finalize(SumCount(total, cnt))


def job_mean_broken() -> JobSpec:
    """The combiner turns integers into pairs, so the reducer only works if
    the combiner runs exactly once. Registration rejects it."""
    return JobSpec(
        name="mean_broken",
        mapper=lambda t, r: [(t, r)],
        reducer=_pair_mean_reduce,
        map_output_type=int,
        reduce_input_type=SumCount,
        combiner=Combiner(_broken_combine, int, SumCount),
    )


def _mean_monoid_map(t, r):
    return [(t, sum_count_make(r))]


def _mean_monoid_reduce(key, values):
    yield key, sum_count_finalize(SUM_COUNT.combine_all(values))


def job_mean_monoid() -> JobSpec:
    return JobSpec(
        name="mean_monoid",
        mapper=_mean_monoid_map,
        reducer=_mean_monoid_reduce,
        map_output_type=SumCount,
        monoid=SUM_COUNT,
        default_strategy="combiner",
    )


def job_mean_inmapper() -> JobSpec:
    """Same mapper and reducer as :func:`job_mean_monoid`, run with
    in-mapper combining by default."""
    return JobSpec(
        name="mean_inmapper",
        mapper=_mean_monoid_map,
        reducer=_mean_monoid_reduce,
        map_output_type=SumCount,
        monoid=SUM_COUNT,
        default_strategy="in_mapper",
    )


def mean_oracle(records: Iterable[tuple[str, int]]) -> list[Record]:
    groups: dict[str, list[int]] = defaultdict(list)
    for key, value in records:
        groups[key].append(value)
    return [
        Record(k, Fraction(sum(v), len(v)))
        for k, v in sorted(groups.items(), key=lambda kv: kv[0].encode("utf-8"))
    ]


# Word count


def _wordcount_map(docid, text):
    return [(w, 1) for w in tokenize(text)]


def _wordcount_reduce(key, values):
    yield key, INT_SUM.combine_all(values)


def job_wordcount() -> JobSpec:
    return JobSpec(
        name="wordcount",
        mapper=_wordcount_map,
        reducer=_wordcount_reduce,
        map_output_type=int,
        monoid=INT_SUM,
        default_strategy="combiner",
    )


def wordcount_oracle(docs: Iterable[tuple]) -> list[Record]:
    counts = Counter()
    for _, text in docs:
        counts.update(tokenize(text))
    return [Record(k, counts[k]) for k in sorted(counts, key=lambda k: k.encode("utf-8"))]


# Co-occurrence stripes


def job_cooccurrence_stripes(cfg: CooccurrenceConfig | None = None) -> JobSpec:
    """One stripe per token occurrence mapping each neighbor to its count.

    With ``cfg.coalesce`` the mapper first sums the stripes of repeated
    terms within a document.
    """
    cfg = cfg or CooccurrenceConfig()

    def mapper(docid, text):
        terms = tokenize(text)
        if not cfg.coalesce:
            return [(w, Stripe(Counter(neighbors(terms, i, cfg)))) for i, w in enumerate(terms)]
        per_term: dict[str, Counter] = {}
        for i, w in enumerate(terms):
            per_term.setdefault(w, Counter()).update(neighbors(terms, i, cfg))
        return [(w, Stripe(h)) for w, h in per_term.items()]

    def reducer(term, stripes):
        yield term, STRIPE.combine_all(stripes)

    return JobSpec(
        name="cooccurrence_stripes",
        mapper=mapper,
        reducer=reducer,
        map_output_type=Stripe,
        monoid=STRIPE,
        default_strategy="combiner",
    )


def cooccurrence_oracle(
    docs: Iterable[tuple], window: int, direction: str = "symmetric"
) -> list[Record]:
    """Nested-loop pair counter; every vocabulary term gets a (possibly empty) row."""
    rows: dict[str, Counter] = {}
    for _, text in docs:
        terms = tokenize(text)
        for w in terms:
            rows.setdefault(w, Counter())
        for i in range(len(terms)):
            for j in range(i + 1, min(len(terms), i + window + 1)):
                rows[terms[i]][terms[j]] += 1
                if direction == "symmetric":
                    rows[terms[j]][terms[i]] += 1
    return [
        Record(w, Stripe(rows[w])) for w in sorted(rows, key=lambda k: k.encode("utf-8"))
    ]


# Distinct count with HyperLogLog


def job_distinct_hll(p: int = 14, hash_seed: int = 0) -> JobSpec:
    if not HyperLogLog.MIN_P <= p <= HyperLogLog.MAX_P:
        raise ConfigError(f"precision must be in [4, 16], got {p}")
    monoid = hll_monoid(p, hash_seed)

    def mapper(docid, text):
        terms = tokenize(text)
        if not terms:
            return []
        return [(DISTINCT_KEY, monoid.identity.add_all(terms))]

    def reducer(key, sketches):
        yield key, monoid.combine_all(sketches).estimate()

    return JobSpec(
        name="distinct_hll",
        mapper=mapper,
        reducer=reducer,
        map_output_type=HyperLogLog,
        monoid=monoid,
        default_strategy="combiner",
    )


def distinct_hll_oracle(docs: Iterable[tuple], p: int = 14, hash_seed: int = 0) -> list[Record]:
    """One sketch over the whole corpus, built without the engine."""
    h = HyperLogLog.empty(p, hash_seed)
    seen = False
    for _, text in docs:
        terms = tokenize(text)
        if terms:
            seen = True
            h = h.add_all(terms)
    return [Record(DISTINCT_KEY, h.estimate())] if seen else []


def exact_distinct(docs: Iterable[tuple]) -> int:
    return len({t for _, text in docs for t in tokenize(text)})


# Input parsing and output rendering


def parse_mean_tsv(lines: Iterable[str]) -> list[tuple[str, int]]:
    out = []
    for n, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        key, sep, value = line.partition("\t")
        if not sep or not key:
            raise ValueError(f"line {n}: expected 'key<TAB>integer', got {line!r}")
        try:
            out.append((key, int(value)))
        except ValueError:
            raise ValueError(f"line {n}: {value!r} is not an integer") from None
    return out


def parse_corpus(lines: Iterable[str]) -> list[tuple[int, str]]:
    """One document per line; the docid is the 0-based line number."""
    return [(i, line.rstrip("\r\n")) for i, line in enumerate(lines)]


def render_value(v) -> str:
    if isinstance(v, Stripe):
        return json.dumps(dict(v.sorted_items()), ensure_ascii=False, separators=(",", ":"))
    if isinstance(v, SumCount):
        return f"{v.sum},{v.cnt}"
    # Fraction renders exactly, e.g. "3" or "11/4"
    return str(v)


def render_tsv(outputs: Iterable[Record]) -> str:
    return "".join(f"{k}\t{render_value(v)}\n" for k, v in outputs)


@dataclass(frozen=True)
class JobOptions:
    window: int = 2
    direction: str = "symmetric"
    coalesce: bool = False
    precision: int = 14
    hash_seed: int = 0


@dataclass(frozen=True)
class JobEntry:
    build: Callable[[JobOptions], JobSpec]
    parse: Callable[[Iterable[str]], list]
    oracle: Callable[[list, JobOptions], list[Record]] | None = field(default=None)


JOBS: dict[str, JobEntry] = {
    "mean_naive": JobEntry(lambda o: job_mean_naive(), parse_mean_tsv, lambda d, o: mean_oracle(d)),
    "mean_broken": JobEntry(lambda o: job_mean_broken(), parse_mean_tsv, lambda d, o: mean_oracle(d)),
    "mean_monoid": JobEntry(lambda o: job_mean_monoid(), parse_mean_tsv, lambda d, o: mean_oracle(d)),
    "mean_inmapper": JobEntry(
        lambda o: job_mean_inmapper(), parse_mean_tsv, lambda d, o: mean_oracle(d)
    ),
    "wordcount": JobEntry(lambda o: job_wordcount(), parse_corpus, lambda d, o: wordcount_oracle(d)),
    "cooccurrence_stripes": JobEntry(
        lambda o: job_cooccurrence_stripes(CooccurrenceConfig(o.window, o.direction, o.coalesce)),
        parse_corpus,
        lambda d, o: cooccurrence_oracle(d, o.window, o.direction),
    ),
    "distinct_hll": JobEntry(
        lambda o: job_distinct_hll(o.precision, o.hash_seed),
        parse_corpus,
        lambda d, o: distinct_hll_oracle(d, o.precision, o.hash_seed),
    ),
}

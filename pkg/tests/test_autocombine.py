import random
from collections import defaultdict

import pytest
from hypothesis import given, settings, strategies as st

from monoidmr import (
    INT_SUM,
    SUM_COUNT,
    CombinerPolicy,
    JobConfig,
    Record,
    SumCount,
    derive_combiner,
    run_job,
    sum_count_make,
    wrap_in_mapper,
)
from monoidmr.errors import UnsupportedMonoidError
from monoidmr.jobs import job_mean_inmapper, job_mean_monoid, mean_oracle
from monoidmr.laws import CONCAT
from monoidmr.synth import random_mean_records


def pair_mapper(t, r):
    return [(t, sum_count_make(r))]


def run_task(factory, split):
    task = factory()
    task.initialize()
    out = []
    for k, v in split:
        out.extend(task.map(k, v))
    closed = list(task.close())
    task.closed = len(closed)
    return out + closed, task


def per_key_fold(split):
    """Oracle: per-key pair sums of the raw emissions."""
    sums = defaultdict(lambda: [0, 0])
    for k, r in split:
        sums[k][0] += r
        sums[k][1] += 1
    return {k: SumCount(s, c) for k, (s, c) in sums.items()}


def test_derive_combiner_pair_sum():
    comb = derive_combiner(SUM_COUNT)
    assert list(comb("a", [SumCount(1, 1), SumCount(2, 1)])) == [Record("a", SumCount(3, 2))]
    assert comb.input_type is SumCount and comb.output_type is SumCount


def test_derive_combiner_singleton():
    comb = derive_combiner(INT_SUM)
    assert list(comb("k", [7])) == [Record("k", 7)]


def test_derive_combiner_rejects_noncommutative():
    with pytest.raises(UnsupportedMonoidError):
        derive_combiner(CONCAT)
    with pytest.raises(UnsupportedMonoidError):
        wrap_in_mapper(lambda k, v: [(k, v)], CONCAT)


def test_in_mapper_emits_at_close():
    split = [("a", 1), ("a", 2), ("b", 7)]
    factory = wrap_in_mapper(pair_mapper, SUM_COUNT, capacity=100)
    task = factory()
    task.initialize()
    for k, v in split:
        assert task.map(k, v) == []
    assert task.close() == [Record("a", SumCount(3, 2)), Record("b", SumCount(7, 1))]
    assert dict(task.close()) == {}


def test_in_mapper_capacity_one():
    split = [("a", 1), ("a", 2), ("b", 7)]
    out, task = run_task(wrap_in_mapper(pair_mapper, SUM_COUNT, capacity=1), split)
    assert sorted(out) == sorted([Record("a", SumCount(3, 2)), Record("b", SumCount(7, 1))],
                                 key=lambda r: r.key)
    assert task.state.flush_count == 1


def test_in_mapper_evicts_largest_key():
    split = [("m", 1), ("z", 1), ("a", 1)]
    factory = wrap_in_mapper(pair_mapper, SUM_COUNT, capacity=2)
    task = factory()
    task.initialize()
    assert task.map("m", 1) == []
    assert task.map("z", 1) == []
    assert task.map("a", 1) == [Record("z", SumCount(1, 1))]
    assert len(task.state.table) == 2


def test_in_mapper_empty_split():
    out, _ = run_task(wrap_in_mapper(pair_mapper, SUM_COUNT), [])
    assert out == []


def test_wrap_in_mapper_rejects_zero_capacity():
    with pytest.raises(ValueError):
        wrap_in_mapper(pair_mapper, SUM_COUNT, 0)


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.tuples(st.sampled_from("abcdefg"), st.integers(-50, 50)), max_size=60),
    st.one_of(st.none(), st.integers(1, 8)),
)
def test_in_mapper_emissions_fold_to_per_key_total(split, capacity):
    out, task = run_task(wrap_in_mapper(pair_mapper, SUM_COUNT, capacity), split)
    folded = defaultdict(lambda: SUM_COUNT.identity)
    for k, v in out:
        folded[k] = SUM_COUNT.combine(folded[k], v)
    assert dict(folded) == per_key_fold(split)
    if capacity is not None:
        assert task.state.flush_count == len(out) - task.closed


def test_in_mapper_table_never_exceeds_capacity():
    factory = wrap_in_mapper(pair_mapper, SUM_COUNT, capacity=3)
    task = factory()
    task.initialize()
    rng = random.Random(0)
    for _ in range(500):
        task.map(f"k{rng.randrange(20)}", 1)
        assert len(task.state.table) <= 3


def test_mean_inmapper_single_split_coalesces():
    res = run_job(job_mean_inmapper(), [("a", v) for v in range(1, 6)], JobConfig(strategy="in_mapper"))
    assert res.metrics.map_output_records == 1
    assert res.outputs == [Record("a", 3)]


def test_distinct_keys_cannot_coalesce():
    records = [(f"k{i}", i) for i in range(40)]
    res = run_job(job_mean_inmapper(), records, JobConfig(strategy="in_mapper", n_splits=3))
    assert res.metrics.map_output_records == 40


@pytest.mark.parametrize("capacity", [1, 2, 16, None])
@pytest.mark.parametrize("seed", range(4))
def test_strategy_equivalence(capacity, seed):
    rng = random.Random(seed)
    records = random_mean_records(rng, rng.randint(1, 600), rng.randint(1, 40))
    expected = mean_oracle(records)
    plain = run_job(job_mean_monoid(), records, JobConfig(n_splits=3))
    assert plain.outputs == expected
    for policy in (CombinerPolicy.never(), CombinerPolicy.once(), CombinerPolicy.random(seed)):
        comb = run_job(job_mean_monoid(), records,
                       JobConfig(n_splits=3, strategy="combiner", policy=policy))
        inm = run_job(job_mean_monoid(), records,
                      JobConfig(n_splits=3, strategy="in_mapper", policy=policy, capacity=capacity))
        assert comb.outputs == expected
        assert inm.outputs == expected
        assert inm.metrics.map_output_records <= plain.metrics.map_output_records


def test_in_mapper_strictly_fewer_map_outputs_with_repeats():
    records = [("a", 1), ("b", 2), ("a", 3), ("b", 4)]
    plain = run_job(job_mean_monoid(), records)
    inm = run_job(job_mean_monoid(), records, JobConfig(strategy="in_mapper", capacity=2))
    assert inm.metrics.map_output_records < plain.metrics.map_output_records

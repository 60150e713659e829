import random

import pytest
from hypothesis import given, settings, strategies as st

from monoidmr import INT_SUM, SUM_COUNT, Monoid, SumCount, check_laws, combine, combine_all
from monoidmr.errors import MonoidTypeError
from monoidmr.laws import CONCAT, LAW_SUBJECTS, SUBTRACTION, gen_int, gen_sum_count


def test_combine_pair_sum():
    assert combine(SUM_COUNT, SumCount(1, 2), SumCount(3, 4)) == SumCount(4, 6)


def test_combine_pair_identity():
    assert combine(SUM_COUNT, SumCount(0, 0), SumCount(7, 3)) == SumCount(7, 3)


def test_combine_int_sum():
    assert combine(INT_SUM, 2, 3) == 5


def test_combine_rejects_foreign_element():
    with pytest.raises(MonoidTypeError):
        combine(SUM_COUNT, SumCount(1, 1), (1, 1))
    with pytest.raises(MonoidTypeError):
        combine(INT_SUM, 1, "1")


def test_combine_does_not_mutate():
    a, b = SumCount(1, 1), SumCount(2, 1)
    combine(SUM_COUNT, a, b)
    assert (a, b) == (SumCount(1, 1), SumCount(2, 1))


def test_combine_all_empty_is_identity():
    assert combine_all(SUM_COUNT, []) == SumCount(0, 0)


def test_combine_all_pairs():
    xs = [SumCount(1, 1), SumCount(2, 1), SumCount(3, 1)]
    # element-wise addition oracle
    expected = SumCount(sum(x.sum for x in xs), sum(x.cnt for x in xs))
    assert expected == SumCount(6, 3)
    assert combine_all(SUM_COUNT, xs) == expected


def test_combine_all_singleton():
    assert combine_all(INT_SUM, [5]) == 5


def test_check_laws_pair_sum_clean():
    report = check_laws(SUM_COUNT, gen_sum_count, 1000, 42)
    assert report.trials == 1000
    assert report.seed == 42
    assert report.failures == []
    assert report.ok


def test_check_laws_finds_subtraction_associativity_failure():
    # (0 - 0) - 1 = -1 but 0 - (0 - 1) = 1
    assert (0 - 0) - 1 != 0 - (0 - 1)
    report = check_laws(SUBTRACTION, lambda rng: rng.randint(-50, 50), 1000, 42)
    assert not report.ok
    laws = {law for law, _ in report.failures}
    assert "associativity" in laws
    law, (a, b, c) = next(f for f in report.failures if f[0] == "associativity")
    assert (a - b) - c != a - (b - c)


def test_check_laws_single_trial():
    report = check_laws(INT_SUM, gen_int, 1, 7)
    assert report.trials == 1
    assert report.failures == []


def test_check_laws_is_deterministic():
    r1 = check_laws(SUBTRACTION, lambda rng: rng.randint(-5, 5), 50, 3)
    r2 = check_laws(SUBTRACTION, lambda rng: rng.randint(-5, 5), 50, 3)
    assert r1.failures == r2.failures


def test_check_laws_rejects_zero_trials():
    with pytest.raises(ValueError):
        check_laws(INT_SUM, gen_int, 0, 1)


def test_commutativity_is_checked_not_assumed():
    lying = Monoid("concat-claims-commutative", "", CONCAT.op, commutative=True, carrier=str)
    report = check_laws(lying, LAW_SUBJECTS["concat"]().gen, 200, 1)
    assert {law for law, _ in report.failures} == {"commutativity"}


def test_noncommutative_monoid_passes_when_flag_is_honest():
    assert LAW_SUBJECTS["concat"]().check(500, 5).ok


@pytest.mark.parametrize("name", ["intsum", "sumcount", "stripe", "bloom", "cms", "hll"])
def test_catalog_monoid_fold_split_point(name):
    subject = LAW_SUBJECTS[name]()
    m = subject.monoid
    rng = random.Random(name)
    for _ in range(50):
        xs = [subject.gen(rng) for _ in range(rng.randint(0, 8))]
        s = rng.randint(0, len(xs))
        assert m.combine(m.combine_all(xs[:s]), m.combine_all(xs[s:])) == m.combine_all(xs)


@pytest.mark.parametrize("name", ["intsum", "sumcount", "stripe", "bloom", "cms", "hll"])
def test_catalog_monoid_fold_permutation(name):
    subject = LAW_SUBJECTS[name]()
    m = subject.monoid
    assert m.commutative
    rng = random.Random(f"perm-{name}")
    for _ in range(50):
        xs = [subject.gen(rng) for _ in range(rng.randint(0, 8))]
        ys = xs[:]
        rng.shuffle(ys)
        assert m.combine_all(ys) == m.combine_all(xs)


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(-10**12, 10**12), st.integers(1, 10**6))), st.data())
def test_sum_count_fold_any_split(pairs, data):
    xs = [SumCount(s, c) for s, c in pairs]
    s = data.draw(st.integers(0, len(xs)))
    whole = combine_all(SUM_COUNT, xs)
    assert combine(SUM_COUNT, combine_all(SUM_COUNT, xs[:s]), combine_all(SUM_COUNT, xs[s:])) == whole
    assert whole == SumCount(sum(p[0] for p in pairs), sum(p[1] for p in pairs))


@given(st.permutations(list(range(-20, 20))))
def test_int_sum_fold_permutation(xs):
    assert combine_all(INT_SUM, xs) == sum(range(-20, 20))

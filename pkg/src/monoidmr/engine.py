"""Deterministic in-process MapReduce runtime.

The pipeline is split -> map -> combine (0..k rounds per split) ->
partition/sort -> reduce. Every stage is deterministic: values in a
reduce group are ordered by (split index, emission order), and outputs
are sorted by key byte order, so a run is reproducible byte-for-byte.
"""

from __future__ import annotations

import random
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .autocombine import derive_combiner, wrap_in_mapper
from .encoding import encode_record, key_bytes
from .errors import (
    CombinePhaseError,
    CombinerTypeError,
    ConfigError,
    JobRegistrationError,
    MapPhaseError,
    MapReduceError,
    RecordError,
    ReducePhaseError,
)
from .hashing import hash64
from .monoid import Monoid
from .records import Combiner, MapFn, MapTask, PlainMapTask, Record

STRATEGIES = ("none", "combiner", "in_mapper")


def _tname(t) -> str:
    if t is None:
        return "None"
    if isinstance(t, tuple):
        return " | ".join(x.__name__ for x in t)
    return getattr(t, "__name__", repr(t))


@dataclass(frozen=True)
class JobSpec:
    """A MapReduce job.

    ``mapper(key, value)`` and ``reducer(key, values)`` both return iterables
    of ``(key, value)`` pairs. ``map_output_type`` is the declared
    intermediate value type; ``reduce_input_type`` defaults to it. Declaring
    ``monoid`` lets the engine derive combiners and in-mapper combining.
    """

    name: str
    mapper: MapFn
    reducer: Callable[[Any, list], Iterable[tuple]]
    map_output_type: Any
    reduce_input_type: Any = None
    combiner: Combiner | None = None
    monoid: Monoid | None = None
    default_strategy: str = "none"

    @property
    def intermediate_type(self):
        return self.map_output_type

    @property
    def declared_reduce_input(self):
        if self.reduce_input_type is None:
            return self.map_output_type
        return self.reduce_input_type


def type_violations(job: JobSpec) -> list[str]:
    t = job.map_output_type
    problems = []
    if job.declared_reduce_input != t:
        problems.append(
            f"mapper-output ({_tname(t)}) != reducer-input ({_tname(job.declared_reduce_input)})"
        )
    if job.combiner is not None:
        if job.combiner.input_type != t:
            problems.append(
                f"mapper-output ({_tname(t)}) != combiner-input ({_tname(job.combiner.input_type)})"
            )
        if job.combiner.output_type != job.combiner.input_type:
            problems.append(
                f"combiner-input ({_tname(job.combiner.input_type)}) != "
                f"combiner-output ({_tname(job.combiner.output_type)})"
            )
        if job.combiner.output_type != job.declared_reduce_input:
            problems.append(
                f"combiner-output ({_tname(job.combiner.output_type)}) != "
                f"reducer-input ({_tname(job.declared_reduce_input)})"
            )
    if job.monoid is not None and job.monoid.carrier != t:
        problems.append(
            f"mapper-output ({_tname(t)}) != monoid carrier ({_tname(job.monoid.carrier)})"
        )
    return problems


def validate_job(job: JobSpec) -> None:
    """Reject jobs whose declared value types break the combiner contract.

    Mapper output, combiner input and output, and reducer input must all
    be the same type, otherwise correctness would depend on how many times
    the combiner happens to run.
    """
    problems = type_violations(job)
    if problems:
        raise JobRegistrationError(
            f"job {job.name!r} violates the combiner type-equality rule: "
            + "; ".join(problems)
        )


@dataclass(frozen=True)
class CombinerPolicy:
    """How many combiner rounds each split receives.

    ``random`` draws each split's count uniformly from {0, 1, 2, 3}, seeded
    by ``(seed, split index)``.
    """

    mode: str = "never"
    k: int = 0
    seed: int = 0

    MODES = ("never", "once", "exactly", "random")

    def __post_init__(self):
        if self.mode not in self.MODES:
            raise ConfigError(f"unknown combiner policy {self.mode!r}")
        if self.mode == "exactly" and self.k < 0:
            raise ConfigError(f"exactly(k) needs k >= 0, got {self.k}")

    @classmethod
    def never(cls) -> CombinerPolicy:
        return cls("never")

    @classmethod
    def once(cls) -> CombinerPolicy:
        return cls("once")

    @classmethod
    def exactly(cls, k: int) -> CombinerPolicy:
        return cls("exactly", k=k)

    @classmethod
    def random(cls, seed: int) -> CombinerPolicy:
        return cls("random", seed=seed)

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> CombinerPolicy:
        """Parse ``never``, ``once``, ``exactly:K`` or ``random``."""
        name, _, arg = text.partition(":")
        if name == "exactly":
            try:
                return cls.exactly(int(arg))
            except ValueError:
                raise ConfigError(f"bad policy {text!r}; expected exactly:K") from None
        if arg:
            raise ConfigError(f"policy {name!r} takes no argument")
        if name == "random":
            return cls.random(seed)
        return cls(name)

    def rounds_for(self, split_index: int) -> int:
        if self.mode == "never":
            return 0
        if self.mode == "once":
            return 1
        if self.mode == "exactly":
            return self.k
        return random.Random(f"{self.seed}:{split_index}").randrange(4)

    def __str__(self) -> str:
        if self.mode == "exactly":
            return f"exactly:{self.k}"
        return self.mode


@dataclass
class Metrics:
    """Record and byte counters for one job run.

    Metrics themselves form a commutative monoid under ``+`` (field-wise
    sums, disjoint union of the per-split round counts).
    """

    map_output_records: int = 0
    combine_input_records: int = 0
    combine_output_records: int = 0
    shuffled_records: int = 0
    shuffled_bytes: int = 0
    reduce_groups: int = 0
    combiner_rounds_applied: dict[int, int] = field(default_factory=dict)

    COUNTERS = (
        "map_output_records",
        "combine_input_records",
        "combine_output_records",
        "shuffled_records",
        "shuffled_bytes",
        "reduce_groups",
    )

    def __add__(self, other: Metrics) -> Metrics:
        if not isinstance(other, Metrics):
            return NotImplemented
        overlap = self.combiner_rounds_applied.keys() & other.combiner_rounds_applied.keys()
        if overlap:
            raise ValueError(f"metrics for split(s) {sorted(overlap)} merged twice")
        out = Metrics(**{f: getattr(self, f) + getattr(other, f) for f in self.COUNTERS})
        out.combiner_rounds_applied = {**self.combiner_rounds_applied, **other.combiner_rounds_applied}
        return out

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {f: getattr(self, f) for f in self.COUNTERS}
        d["combiner_rounds_applied"] = [
            self.combiner_rounds_applied[i] for i in sorted(self.combiner_rounds_applied)
        ]
        return d


@dataclass(frozen=True)
class JobConfig:
    n_splits: int = 1
    n_reducers: int = 1
    strategy: str = "none"
    policy: CombinerPolicy = field(default_factory=CombinerPolicy.never)
    capacity: int | None = None
    partition_seed: int = 0
    max_workers: int = 1
    # Test-only: skip declared and runtime type checks so ill-typed jobs can run.
    allow_broken: bool = False

    def __post_init__(self):
        if self.n_splits < 1:
            raise ConfigError(f"n_splits must be >= 1, got {self.n_splits}")
        if self.n_reducers < 1:
            raise ConfigError(f"n_reducers must be >= 1, got {self.n_reducers}")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        if self.capacity is not None and self.capacity < 1:
            raise ConfigError(f"capacity must be >= 1, got {self.capacity}")
        if self.max_workers < 1:
            raise ConfigError("max_workers must be >= 1")


@dataclass
class JobResult:
    outputs: list[Record]
    metrics: Metrics


def split_input(records: Sequence, n_splits: int) -> list[list]:
    """Contiguous near-equal splits; the first ``len % n`` get one extra."""
    if n_splits < 1:
        raise ConfigError(f"n_splits must be >= 1, got {n_splits}")
    records = list(records)
    q, r = divmod(len(records), n_splits)
    splits, start = [], 0
    for i in range(n_splits):
        end = start + q + (1 if i < r else 0)
        splits.append(records[start:end])
        start = end
    return splits


def _as_record(pair) -> Record:
    key, value = pair
    if not key_bytes(key):
        raise RecordError("intermediate records must have a non-empty key")
    return Record(key, value)


def _check_value(value, expected) -> bool:
    return expected is None or isinstance(value, expected)


def _parallel_map(fn, items, max_workers: int) -> list:
    if max_workers <= 1 or len(items) <= 1:
        return [fn(i, x) for i, x in enumerate(items)]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(fn, range(len(items)), items))


def run_map_task(
    split_index: int,
    split: Sequence,
    task: MapTask,
    value_type=None,
) -> list[Record]:
    out: list[Record] = []
    try:
        task.initialize()
        for key, value in split:
            out.extend(_as_record(p) for p in task.map(key, value))
        out.extend(_as_record(p) for p in task.close())
        for rec in out:
            if not _check_value(rec.value, value_type):
                raise TypeError(
                    f"mapper emitted {type(rec.value).__name__} for key {rec.key!r}; "
                    f"declared {_tname(value_type)}"
                )
    except MapPhaseError:
        raise
    except Exception as exc:
        raise MapPhaseError(split_index, exc) from exc
    return out


def run_map_phase(
    job: JobSpec,
    splits: Sequence[Sequence],
    task_factory: Callable[[], MapTask] | None = None,
    check_types: bool = True,
    max_workers: int = 1,
) -> tuple[list[list[Record]], Metrics]:
    """Run one map task per split; emission order within a split is kept."""
    if task_factory is None:
        task_factory = lambda: PlainMapTask(job.mapper)  # noqa: E731
    value_type = job.map_output_type if check_types else None

    def one(i, split):
        return run_map_task(i, split, task_factory(), value_type)

    per_split = _parallel_map(one, list(splits), max_workers)
    metrics = Metrics(map_output_records=sum(len(s) for s in per_split))
    return per_split, metrics


def group_by_key(records: Iterable[Record]) -> list[tuple[Any, list]]:
    """Group values by key; groups in key byte order, values in arrival order."""
    groups: dict[Any, list] = {}
    for key, value in records:
        groups.setdefault(key, []).append(value)
    return [(k, groups[k]) for k in sorted(groups, key=key_bytes)]


def apply_combiner_rounds(
    records: Sequence[Record],
    combiner: Combiner,
    policy: CombinerPolicy | int,
    split_index: int = 0,
    output_type=None,
) -> tuple[list[Record], Metrics]:
    """Run ``combiner`` over one split's records for the policy's round count.

    Each round regroups the split's current records by key. Zero rounds
    pass records through untouched.
    """
    rounds = policy if isinstance(policy, int) else policy.rounds_for(split_index)
    metrics = Metrics(combiner_rounds_applied={split_index: rounds})
    current = [Record(*r) for r in records]
    for _ in range(rounds):
        nxt: list[Record] = []
        for key, values in group_by_key(current):
            try:
                emitted = [_as_record(p) for p in combiner(key, values)]
            except MapReduceError:
                raise
            except Exception as exc:
                raise CombinePhaseError(split_index, key, exc) from exc
            for rec in emitted:
                if not _check_value(rec.value, output_type):
                    raise CombinerTypeError(
                        f"combiner emitted {type(rec.value).__name__} for key {rec.key!r} "
                        f"in split {split_index}; declared {_tname(output_type)}"
                    )
            nxt.extend(emitted)
        metrics.combine_input_records += len(current)
        metrics.combine_output_records += len(nxt)
        current = nxt
    return current, metrics


def partition(key, n_reducers: int, seed: int = 0) -> int:
    return hash64(key_bytes(key), seed) % n_reducers


def shuffle_and_sort(
    per_split_records: Sequence[Sequence[Record]],
    n_reducers: int,
    partition_seed: int = 0,
) -> list[list[tuple[Any, list]]]:
    """Partition by hashed key and group within each reducer."""
    if n_reducers < 1:
        raise ConfigError(f"n_reducers must be >= 1, got {n_reducers}")
    buckets: list[list[Record]] = [[] for _ in range(n_reducers)]
    for split in per_split_records:
        for rec in split:
            buckets[partition(rec[0], n_reducers, partition_seed)].append(rec)
    return [group_by_key(b) for b in buckets]


def shuffle_metrics(per_split_records: Sequence[Sequence[Record]]) -> Metrics:
    n = 0
    size = 0
    for split in per_split_records:
        for key, value in split:
            n += 1
            size += len(encode_record(key, value))
    return Metrics(shuffled_records=n, shuffled_bytes=size)


def run_reduce_phase(
    job: JobSpec,
    groups: Sequence,
    max_workers: int = 1,
) -> tuple[list[Record], Metrics]:
    """Run the reducer once per key group; outputs sorted by key.

    ``groups`` is either one list of ``(key, values)`` pairs or a list of
    such lists, one per reducer.
    """
    if groups and isinstance(groups[0], list):
        per_reducer = list(groups)
    else:
        per_reducer = [list(groups)]

    def one(_, reducer_groups):
        out = []
        for key, values in reducer_groups:
            try:
                out.extend(Record(k, v) for k, v in job.reducer(key, values))
            except Exception as exc:
                raise ReducePhaseError(key, exc) from exc
        return out

    results = _parallel_map(one, per_reducer, max_workers)
    outputs = [rec for chunk in results for rec in chunk]
    outputs.sort(key=lambda r: key_bytes(r.key))
    return outputs, Metrics(reduce_groups=sum(len(g) for g in per_reducer))


def _choose_combiner(job: JobSpec) -> Combiner:
    if job.combiner is not None:
        if job.monoid is not None:
            warnings.warn(
                f"job {job.name!r} declares both a combiner and a monoid; "
                "using the explicit combiner",
                stacklevel=3,
            )
        return job.combiner
    return derive_combiner(job.monoid)


def run_job(job: JobSpec, records: Sequence, config: JobConfig | None = None) -> JobResult:
    """Run ``job`` over ``records`` (a sequence of input ``(key, value)`` pairs)."""
    config = config or JobConfig()
    check_types = not config.allow_broken
    if check_types:
        validate_job(job)

    combiner = None
    task_factory = None
    if config.strategy == "combiner":
        if job.combiner is None and job.monoid is None:
            raise ConfigError(
                f"strategy 'combiner' needs job {job.name!r} to declare a combiner or a monoid"
            )
        combiner = _choose_combiner(job)
    elif config.strategy == "in_mapper":
        if job.monoid is None:
            raise ConfigError(
                f"strategy 'in_mapper' needs job {job.name!r} to declare a monoid"
            )
        task_factory = wrap_in_mapper(job.mapper, job.monoid, config.capacity)
        combiner = _choose_combiner(job)

    splits = split_input(records, config.n_splits)
    value_type = job.map_output_type if check_types else None

    def map_side(i, split):
        task = task_factory() if task_factory else PlainMapTask(job.mapper)
        emitted = run_map_task(i, split, task, value_type)
        m = Metrics(map_output_records=len(emitted))
        if combiner is None:
            m.combiner_rounds_applied = {i: 0}
            return emitted, m
        combined, cm = apply_combiner_rounds(emitted, combiner, config.policy, i, value_type)
        return combined, m + cm

    results = _parallel_map(map_side, splits, config.max_workers)
    per_split = [r for r, _ in results]
    metrics = Metrics()
    for _, m in results:
        metrics = metrics + m
    metrics = metrics + shuffle_metrics(per_split)

    groups = shuffle_and_sort(per_split, config.n_reducers, config.partition_seed)
    outputs, rm = run_reduce_phase(job, groups, config.max_workers)
    return JobResult(outputs, metrics + rm)

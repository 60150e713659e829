"""Commutative monoids as the basis for local aggregation in MapReduce.

The package provides a small monoid catalog (integer sum, sum/count pairs,
term stripes, Bloom filters, count-min sketches, HyperLogLog), a
deterministic in-process MapReduce engine, and a layer that derives
combiners and in-mapper combining from a job's declared monoid.
"""

from .autocombine import InMapperState, InMapperTask, derive_combiner, wrap_in_mapper
from .catalog import (
    INT_SUM,
    STRIPE,
    SUM_COUNT,
    Stripe,
    SumCount,
    stripe_sum,
    sum_count_finalize,
    sum_count_make,
)
from .encoding import encode_record, encode_value
from .engine import (
    CombinerPolicy,
    JobConfig,
    JobResult,
    JobSpec,
    Metrics,
    apply_combiner_rounds,
    run_job,
    run_map_phase,
    run_reduce_phase,
    shuffle_and_sort,
    split_input,
    validate_job,
)
from .monoid import LawReport, Monoid, check_laws, combine, combine_all
from .records import Combiner, Record
from .sketches import (
    BloomFilter,
    CountMinSketch,
    HyperLogLog,
    bloom_add,
    bloom_contains,
    bloom_monoid,
    bloom_union,
    cms_add,
    cms_estimate,
    cms_merge,
    cms_monoid,
    hll_add,
    hll_estimate,
    hll_merge,
    hll_monoid,
)

__all__ = [
    "BloomFilter", "Combiner", "CombinerPolicy", "CountMinSketch", "HyperLogLog",
    "INT_SUM", "InMapperState", "InMapperTask", "JobConfig", "JobResult", "JobSpec",
    "LawReport", "Metrics", "Monoid", "Record", "STRIPE", "SUM_COUNT", "Stripe",
    "SumCount", "apply_combiner_rounds", "bloom_add", "bloom_contains", "bloom_monoid",
    "bloom_union", "check_laws", "cms_add", "cms_estimate", "cms_merge", "cms_monoid",
    "combine", "combine_all", "derive_combiner", "encode_record", "encode_value",
    "hll_add", "hll_estimate", "hll_merge", "hll_monoid", "run_job", "run_map_phase",
    "run_reduce_phase", "shuffle_and_sort", "split_input", "stripe_sum",
    "sum_count_finalize", "sum_count_make", "validate_job", "wrap_in_mapper",
]

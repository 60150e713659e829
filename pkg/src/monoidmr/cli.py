"""Command-line front end: run a job, compare combining strategies, check laws.

Exit codes: 0 success, 1 job failure or invariance violation, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .engine import STRATEGIES, CombinerPolicy, JobConfig, JobResult, run_job
from .errors import ConfigError, MapReduceError
from .jobs import JOBS, JobOptions, render_tsv
from .laws import LAW_SUBJECTS

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    job: str
    input: Path
    strategy: str | None = None
    policy: str = "never"
    n_splits: int = 1
    n_reducers: int = 1
    seed: int = 0
    capacity: int | None = None
    output: Path | None = None
    metrics: Path | None = None
    workers: int = 1
    allow_broken: bool = False

    def label(self) -> str:
        parts = [f"strategy={self.strategy or 'default'}", f"policy={self.policy}", f"splits={self.n_splits}",
                 f"reducers={self.n_reducers}"]
        if self.capacity is not None:
            parts.append(f"capacity={self.capacity}")
        if self.policy == "random":
            parts.append(f"seed={self.seed}")
        return ",".join(parts)


def _err(msg: str) -> None:
    print(f"monoidmr: error: {msg}", file=sys.stderr)


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _read_input(cfg: RunConfig) -> list:
    try:
        with open(cfg.input, encoding="utf-8") as fh:
            return JOBS[cfg.job].parse(fh)
    except OSError as exc:
        raise UsageError(f"cannot read input {cfg.input}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(f"{cfg.input}: {exc}") from None


def _execute(cfg: RunConfig, opts: JobOptions, records: list) -> JobResult:
    job = JOBS[cfg.job].build(opts)
    strategy = cfg.strategy or job.default_strategy
    engine_cfg = JobConfig(
        n_splits=cfg.n_splits,
        n_reducers=cfg.n_reducers,
        strategy=strategy,
        policy=CombinerPolicy.parse(cfg.policy, cfg.seed),
        capacity=cfg.capacity,
        max_workers=cfg.workers,
        allow_broken=cfg.allow_broken,
    )
    return run_job(job, records, engine_cfg)


def cmd_run(cfg: RunConfig, opts: JobOptions) -> int:
    try:
        records = _read_input(cfg)
        result = _execute(cfg, opts, records)
    except (UsageError, ConfigError) as exc:
        _err(str(exc))
        return EXIT_USAGE
    except MapReduceError as exc:
        _err(str(exc))
        return EXIT_FAILURE

    tsv = render_tsv(result.outputs)
    if cfg.output is None:
        sys.stdout.write(tsv)
    else:
        cfg.output.write_text(tsv, encoding="utf-8")
    if cfg.metrics is not None:
        _write_json(cfg.metrics, result.metrics.to_dict())
    return EXIT_OK


_CONFIG_KEYS = {
    "strategy": ("strategy", str),
    "policy": ("policy", str),
    "splits": ("n_splits", int),
    "reducers": ("n_reducers", int),
    "capacity": ("capacity", int),
    "seed": ("seed", int),
}


def parse_config_spec(text: str, base: RunConfig) -> RunConfig:
    """Parse ``key=value,key=value`` over ``base``; e.g. ``strategy=combiner,policy=once``."""
    changes = {}
    for item in filter(None, text.split(",")):
        key, sep, value = item.partition("=")
        if not sep or key not in _CONFIG_KEYS:
            raise UsageError(f"bad config item {item!r}; keys are {sorted(_CONFIG_KEYS)}")
        field_name, conv = _CONFIG_KEYS[key]
        try:
            changes[field_name] = conv(value)
        except ValueError:
            raise UsageError(f"bad value for {key}: {value!r}") from None
    return replace(base, **changes)


def cmd_compare(base: RunConfig, opts: JobOptions, specs: list[str], report: Path | None) -> int:
    if not specs:
        specs = [f"strategy={s}" for s in STRATEGIES]
    try:
        configs = [parse_config_spec(s, base) for s in specs]
        if len(configs) < 2:
            raise UsageError("compare needs at least two configurations")
        records = _read_input(base)
        results = [_execute(c, opts, records) for c in configs]
    except (UsageError, ConfigError) as exc:
        _err(str(exc))
        return EXIT_USAGE
    except MapReduceError as exc:
        _err(str(exc))
        return EXIT_FAILURE

    job = JOBS[base.job].build(opts)
    rendered = [render_tsv(r.outputs) for r in results]
    identical = all(r == rendered[0] for r in rendered)
    baseline = results[0].metrics.shuffled_bytes
    rows = []
    for c, r in zip(configs, results):
        m = r.metrics
        rows.append({
            "config": c.label(),
            "map_output_records": m.map_output_records,
            "shuffled_records": m.shuffled_records,
            "shuffled_bytes": m.shuffled_bytes,
            "bytes_ratio_vs_first": round(m.shuffled_bytes / baseline, 6) if baseline else None,
        })

    print(f"{'config':<60} {'map_out':>10} {'shuffled':>10} {'bytes':>12} {'ratio':>8}")
    for row in rows:
        ratio = row["bytes_ratio_vs_first"]
        print(f"{row['config']:<60} {row['map_output_records']:>10} {row['shuffled_records']:>10} "
              f"{row['shuffled_bytes']:>12} {'-' if ratio is None else f'{ratio:.4f}':>8}")
    print(f"outputs identical: {identical}")
    if report is not None:
        _write_json(report, {"job": base.job, "outputs_identical": identical, "runs": rows})

    if job.monoid is not None and not identical:
        _err("outputs differ across configurations of a monoid job")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_check_laws(name: str, trials: int, seed: int) -> int:
    if name not in LAW_SUBJECTS:
        _err(f"unknown monoid {name!r}; choose from {sorted(LAW_SUBJECTS)}")
        return EXIT_USAGE
    if trials < 1:
        _err(f"trials must be >= 1, got {trials}")
        return EXIT_USAGE
    report = LAW_SUBJECTS[name]().check(trials, seed)
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_FAILURE


def _add_job_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--job", required=True, choices=sorted(JOBS))
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--splits", type=int, default=1)
    p.add_argument("--reducers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="seed for the random combiner policy")
    p.add_argument("--capacity", type=int, default=None,
                   help="max distinct keys held by an in-mapper table (default unbounded)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--window", type=int, default=2, help="co-occurrence window")
    p.add_argument("--direction", choices=["symmetric", "following"], default="symmetric")
    p.add_argument("--coalesce", action="store_true",
                   help="sum stripes per document inside the co-occurrence mapper")
    p.add_argument("--precision", type=int, default=14, help="HyperLogLog precision p")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monoidmr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one job")
    _add_job_args(run)
    run.add_argument("--strategy", choices=STRATEGIES, default=None,
                     help="local aggregation strategy (default: the job's own)")
    run.add_argument("--policy", default="never", help="never | once | exactly:K | random")
    run.add_argument("--output", type=Path, default=None)
    run.add_argument("--metrics", type=Path, default=None)
    run.add_argument("--allow-broken", action="store_true",
                     help="skip value-type checks (test backdoor)")

    cmp_ = sub.add_parser("compare", help="run a job under several configurations")
    _add_job_args(cmp_)
    cmp_.add_argument("--policy", default="once", help="default policy for each config")
    cmp_.add_argument("--config", action="append", default=[],
                      help="e.g. strategy=combiner,policy=random,splits=4 (repeatable)")
    cmp_.add_argument("--report", type=Path, default=None)

    laws = sub.add_parser("check-laws", help="sample the monoid laws")
    laws.add_argument("monoid")
    laws.add_argument("trials", nargs="?", type=int, default=1000)
    laws.add_argument("seed", nargs="?", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check-laws":
        return cmd_check_laws(args.monoid, args.trials, args.seed)

    try:
        opts = JobOptions(window=args.window, direction=args.direction,
                          coalesce=args.coalesce, precision=args.precision)
        cfg = RunConfig(
            job=args.job,
            input=args.input,
            strategy=getattr(args, "strategy", None),
            policy=args.policy,
            n_splits=args.splits,
            n_reducers=args.reducers,
            seed=args.seed,
            capacity=args.capacity,
            output=getattr(args, "output", None),
            metrics=getattr(args, "metrics", None),
            workers=args.workers,
            allow_broken=getattr(args, "allow_broken", False),
        )
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_USAGE
    if args.command == "run":
        return cmd_run(cfg, opts)
    return cmd_compare(cfg, opts, args.config, args.report)


if __name__ == "__main__":
    sys.exit(main())

"""Experiment orchestration: per-trial splits, inner cross-validation,
timed feature generation, test accuracy, approximation error, and report
emission.

The per-record flow mirrors the benchmark protocol this package
reproduces: split the data in half, tune lambda by inner CV on the
training half, time the feature generation in isolation, fit ridge
coefficients, score sign accuracy on the test half, and measure the
relative kernel approximation error on a subsample of the training half.
"""

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .datasets import (
    GIVEN_PARTITION,
    RANDOM_HALF,
    load_dataset,
    load_dataset_pair,
    split,
)
from .features import feature_map, sample_mc, sample_qmc
from .kernels import KernelSpec, kernel_matrix, relative_approx_error, spectral_density
from .krr import classify_accuracy, cross_validate, fit, predict
from .leverage import erls_baseline_pipeline, surrogate_pipeline

METHODS = ("RFF", "QMC", "LeverageRFF", "SurrogateRFF")

REPORT_HEADER = "method,s,trial,accuracy,rel_error,gen_time_s,solve_time_s,lambda"

# Tags that keep the per-trial derived seed streams disjoint.
_TAG_SPLIT, _TAG_CV, _TAG_GEN, _TAG_ERR = 0, 1, 2, 3


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one benchmark run needs.

    ``s_multipliers`` are multiples of the data dimension (s = mult * d);
    ``pool_multiplier`` sizes the resampling pool as l = mult * s.
    ``test_data`` switches the split policy to the given partition.
    """

    data: str
    format: str = "csv"
    methods: tuple = METHODS
    s_multipliers: tuple = (1,)
    pool_multiplier: int = 1
    sigma: float = 1.0
    lambda_grid: tuple = (0.05, 0.1, 0.5, 1.0)
    folds: int = 5
    trials: int = 10
    seed: int = 0
    err_subsample: int = 1000
    variant: str = "simplified"
    test_data: str = None
    out: str = None
    emit: str = "csv"
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(
            self, "s_multipliers", tuple(int(m) for m in self.s_multipliers)
        )
        object.__setattr__(
            self, "lambda_grid", tuple(float(v) for v in self.lambda_grid)
        )
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if not self.s_multipliers or any(m < 1 for m in self.s_multipliers):
            raise ValueError("s multipliers must be positive")
        if self.pool_multiplier < 1:
            raise ValueError("pool multiplier must be positive")
        if not self.lambda_grid or any(v <= 0 for v in self.lambda_grid):
            raise ValueError("lambda grid must be nonempty and positive")
        if self.folds < 2:
            raise ValueError(f"need at least 2 folds, got {self.folds}")
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; choose from {METHODS}")
        if not self.methods:
            raise ValueError("no methods selected")
        if self.variant not in ("full", "simplified"):
            raise ValueError(f"variant must be full or simplified, got {self.variant}")
        if self.emit not in ("csv", "jsonl"):
            raise ValueError(f"emit must be csv or jsonl, got {self.emit}")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if self.err_subsample < 2:
            raise ValueError("error subsample must be at least 2")


@dataclass(frozen=True)
class TrialRecord:
    """One (method, s, trial) outcome; stages not run hold NaN."""

    method: str
    s: int
    trial: int
    accuracy: float
    rel_error: float
    gen_time_s: float
    solve_time_s: float
    lam: float


def _child_seed(seed, trial, tag):
    return np.random.SeedSequence([int(seed), int(trial), tag])


def generate_features(method, X, y, spec, s, pool_size, variant, lam, seed):
    """Sample (and for resampling methods, score and resample) frequencies,
    then build the feature matrix.  This is the unit the benchmark timer
    brackets.  Returns (pool, FeatureMatrix)."""
    if method == "RFF":
        pool = sample_mc(spectral_density(spec, X.shape[1]), s, seed)
        return pool, feature_map(X, pool)
    if method == "QMC":
        pool = sample_qmc(spectral_density(spec, X.shape[1]), s)
        return pool, feature_map(X, pool)
    if method == "SurrogateRFF":
        return surrogate_pipeline(
            X, y, spec, s, lam,
            pool_size=pool_size, variant=variant, seed=seed, return_features=True,
        )
    if method == "LeverageRFF":
        return erls_baseline_pipeline(
            X, y, spec, s, lam,
            pool_size=pool_size, seed=seed, return_features=True,
        )
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def make_sampler(method, spec, s, pool_size, variant="simplified"):
    """Wrap a method as a CV sampler callable (X, y, lam, seed) -> pool.

    The callable advertises ``lambda_dependent``: only the approximate
    leverage baseline actually changes its plan with lambda (the surrogate
    scores scale by 1/lambda uniformly, which cancels in normalization),
    so cross-validation can reuse pools and Gram matrices across the grid
    for every other method.
    """

    def sampler(X, y, lam, seed):
        pool, _ = generate_features(method, X, y, spec, s, pool_size, variant, lam, seed)
        return pool

    sampler.lambda_dependent = method == "LeverageRFF"
    return sampler


def _with_context(exc, method, s, trial):
    message = f"[method={method} s={s} trial={trial}] {exc}"
    try:
        wrapped = type(exc)(message)
    except TypeError:
        wrapped = RuntimeError(message)
    return wrapped


def _load_for_config(config):
    if config.test_data:
        return load_dataset_pair(config.data, config.test_data, config.format)
    return load_dataset(config.data, config.format)


def _run_one(config, dataset, spec, method, s, trial, mode):
    policy = GIVEN_PARTITION if dataset.given_test is not None else RANDOM_HALF
    train, test = split(dataset, policy, _child_seed(config.seed, trial, _TAG_SPLIT))
    pool_size = config.pool_multiplier * s

    if mode == "full":
        sampler = make_sampler(method, spec, s, pool_size, config.variant)
        report = cross_validate(
            train.X,
            train.y,
            sampler,
            config.lambda_grid,
            folds=config.folds,
            seed=_child_seed(config.seed, trial, _TAG_CV),
        )
        lam = report.chosen_lambda
    else:
        lam = float(sorted(config.lambda_grid)[0])

    start = time.perf_counter()
    pool, Z = generate_features(
        method,
        train.X,
        train.y,
        spec,
        s,
        pool_size,
        config.variant,
        lam,
        _child_seed(config.seed, trial, _TAG_GEN),
    )
    gen_time = time.perf_counter() - start

    accuracy = solve_time = math.nan
    if mode == "full":
        start = time.perf_counter()
        model = fit(Z, train.y, lam, pool)
        solve_time = time.perf_counter() - start
        accuracy = classify_accuracy(predict(model, test.X), test.y)

    rel_error = math.nan
    if mode in ("full", "error"):
        count = min(config.err_subsample, train.n)
        rng = np.random.default_rng(_child_seed(config.seed, trial, _TAG_ERR))
        subset = rng.choice(train.n, size=count, replace=False)
        K_sub = kernel_matrix(train.X[subset], spec)
        Z_sub = feature_map(train.X[subset], pool)
        rel_error = relative_approx_error(K_sub, Z_sub)

    return TrialRecord(
        method=method,
        s=int(s),
        trial=int(trial),
        accuracy=accuracy,
        rel_error=rel_error,
        gen_time_s=gen_time,
        solve_time_s=solve_time,
        lam=float(lam),
    )


def run_experiment(config, dataset=None, mode="full", on_record=None):
    """Run every (method, s, trial) combination of the config.

    ``mode`` selects how much of the per-record flow runs: "full" (CV,
    fit, accuracy, approximation error), "error" (feature generation and
    approximation error only), or "timing" (feature generation only,
    always single-threaded).  Records arrive in deterministic order; all
    non-timing fields are pure functions of the config.  ``on_record`` is
    called with each record as it is produced.
    """
    if mode not in ("full", "error", "timing"):
        raise ValueError(f"unknown mode {mode!r}")
    if dataset is None:
        dataset = _load_for_config(config)
    spec = KernelSpec(config.sigma)
    tasks = [
        (method, mult * dataset.dim, trial)
        for mult in config.s_multipliers
        for method in config.methods
        for trial in range(config.trials)
    ]

    def run_task(task):
        method, s, trial = task
        try:
            return _run_one(config, dataset, spec, method, s, trial, mode)
        except Exception as exc:
            raise _with_context(exc, method, s, trial) from exc

    def collect(iterator):
        records = []
        for record in iterator:
            if on_record is not None:
                on_record(record)
            records.append(record)
        return records

    threads = 1 if mode == "timing" else config.threads
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return collect(pool.map(run_task, tasks))
    return collect(run_task(task) for task in tasks)


def _format_float(value):
    return f"{value:.9g}"


def _summary_lines(records):
    groups = {}
    for record in records:
        groups.setdefault((record.method, record.s), []).append(record)
    lines = []
    for (method, s), group in groups.items():
        parts = [f"# summary method={method} s={s} trials={len(group)}"]
        for name in ("accuracy", "rel_error", "gen_time_s", "solve_time_s"):
            values = np.array([getattr(record, name) for record in group])
            parts.append(
                f"{name}={_format_float(values.mean())}"
                f"±{_format_float(values.std())}"
            )
        lines.append(" ".join(parts))
    return lines


def _records_to_csv(records):
    lines = [REPORT_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    r.method,
                    str(r.s),
                    str(r.trial),
                    _format_float(r.accuracy),
                    _format_float(r.rel_error),
                    _format_float(r.gen_time_s),
                    _format_float(r.solve_time_s),
                    _format_float(r.lam),
                ]
            )
        )
    lines.extend(_summary_lines(records))
    return "\n".join(lines) + "\n"


def _records_to_jsonl(records):
    lines = []
    for r in records:
        row = {
            "method": r.method,
            "s": r.s,
            "trial": r.trial,
            "accuracy": r.accuracy,
            "rel_error": r.rel_error,
            "gen_time_s": r.gen_time_s,
            "solve_time_s": r.solve_time_s,
            "lambda": r.lam,
        }
        for key, value in row.items():
            if isinstance(value, float) and math.isnan(value):
                row[key] = None
        lines.append(json.dumps(row))
    return "\n".join(lines) + "\n"


def render_report(records, fmt="csv"):
    """Records as report text: fixed-header CSV with '#' mean±std summary
    lines appended, or JSON-lines mirroring the fields."""
    if not records:
        raise ValueError("no records to emit")
    if fmt == "csv":
        return _records_to_csv(records)
    if fmt == "jsonl":
        return _records_to_jsonl(records)
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(records, path, fmt="csv"):
    """Write the rendered report to a file."""
    text = render_report(records, fmt)
    with open(path, "w") as handle:
        handle.write(text)
    return path


def _record_from_fields(fields):
    def to_float(value):
        return math.nan if value is None else float(value)

    return TrialRecord(
        method=str(fields["method"]),
        s=int(fields["s"]),
        trial=int(fields["trial"]),
        accuracy=to_float(fields["accuracy"]),
        rel_error=to_float(fields["rel_error"]),
        gen_time_s=to_float(fields["gen_time_s"]),
        solve_time_s=to_float(fields["solve_time_s"]),
        lam=to_float(fields["lambda"]),
    )


def read_report(path):
    """Parse a report file (CSV or JSON-lines) back into TrialRecords."""
    with open(path) as handle:
        lines = [line.rstrip("\n") for line in handle if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty report")
    records = []
    if lines[0].lstrip().startswith("{"):
        for line in lines:
            records.append(_record_from_fields(json.loads(line)))
        return records
    if lines[0] != REPORT_HEADER:
        raise ValueError(f"{path}: unrecognized report header {lines[0]!r}")
    columns = REPORT_HEADER.split(",")
    for line in lines[1:]:
        if line.startswith("#"):
            continue
        values = line.split(",")
        if len(values) != len(columns):
            raise ValueError(f"{path}: malformed row {line!r}")
        records.append(_record_from_fields(dict(zip(columns, values))))
    return records

"""Monte Carlo experiment harness: recovery-rate sweeps over the number of
measurements, noise and sparsity sweeps, projection audits and probe
commands, with CSV / manifest output.

Every trial derives its RNG stream from (master_seed, point_index,
trial_index), so reruns produce byte-identical CSVs up to the wall-clock
column regardless of worker count.  Aggregates are computed with plain
serial arithmetic (not numpy reductions) so downstream consumers in any
language can reproduce them digit for digit.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__
from .backend import kernel_backend
from .core import Dictionary
from .exceptions import ConfigError, InfeasibleBruteForceError
from .generate import awgn, clustered_block_coeffs, gaussian_sensing, overcomplete_dft
from .rip import exact_drip, sampled_drip_lower_bound
from .selectors import (
    BompSelector,
    BruteForceSelector,
    EpsBompSelector,
    OmpSelector,
    SupportSelector,
    ThresholdingSelector,
    estimate_near_optimality,
)
from .solver import HaltingPolicy, RecoveryProblem, sscosamp
from .theory import (
    NoiseBoundParams,
    check_convergence_condition,
    epsilon_threshold,
    iteration_constants,
    noise_projection_bound,
    t_star,
)

SCHEMA_VERSION = 1

TRIAL_COLUMNS = [
    "experiment_id", "trial", "m", "d", "n", "k", "B", "selector", "epsilon",
    "sigma", "seed", "iterations", "halt_reason", "rel_error", "success",
    "wall_ms",
]

EXPERIMENT_KINDS = (
    "recovery-rate", "noise-sweep", "k-sweep", "rip-probe",
    "projection-audit", "theory-probe",
)

# Selector families; block-aware ones consume the configured block
# structure, the rest solve at atom granularity with sparsity k * B.
_SELECTOR_BLOCK_AWARE = {
    "thresholding": True,
    "omp": False,
    "eps-omp": False,
    "bomp": True,
    "eps-bomp": True,
    "brute-force": True,
}


def make_selector(name: str, epsilon: float) -> SupportSelector:
    if name == "thresholding":
        return ThresholdingSelector()
    if name == "omp":
        return OmpSelector()
    if name == "bomp":
        return BompSelector()
    if name in ("eps-omp", "eps-bomp"):
        return EpsBompSelector(epsilon)
    if name == "brute-force":
        return BruteForceSelector()
    raise ConfigError(f"unknown selector {name!r}")


def selector_uses_epsilon(name: str) -> bool:
    return name in ("eps-omp", "eps-bomp")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    d: int = 128
    redundancy: int = 4
    B: int = 4
    k: tuple[int, ...] = (2,)
    m: tuple[int, ...] = (40,)
    sigma: tuple[float, ...] = (0.0,)
    selectors: tuple[str, ...] = ("eps-bomp",)
    epsilon: float = float(np.sqrt(0.1))
    a: int = 2
    trials: int = 200
    master_seed: int = 0
    success_threshold: float = 1e-4
    min_gap: int = 1
    max_iterations: int = 50
    field_convention: str = "complex"
    workers: int = 1
    out: str | None = None
    # probe-only knobs
    rip_mode: str = "exact"
    rip_trials: int = 1000
    C_k: float = 1.0
    C_tilde_2k: float = 1.0
    gamma: float = 0.1
    delta_3zp1k: float = 0.0
    delta_zp1k: float = 0.0
    delta_3zk: float = 0.0
    zeta: float = 1.0
    beta: float = 1.0
    norm_x: float = 1.0
    norm_e: float = 0.0

    @property
    def n(self) -> int:
        return self.redundancy * self.d

    def validate(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.d < 1 or self.redundancy < 1:
            raise ConfigError("d and redundancy must be positive")
        if self.B < 1 or self.n % self.B != 0:
            raise ConfigError(f"block size {self.B} does not divide {self.n} atoms")
        if not self.k or any(kk < 1 for kk in self.k):
            raise ConfigError("k values must be positive")
        if any(kk * self.B > self.n for kk in self.k):
            raise ConfigError("k * B exceeds the number of atoms")
        if not self.m or any(mm < 1 for mm in self.m):
            raise ConfigError("m values must be positive")
        if not self.sigma or any(s < 0 for s in self.sigma):
            raise ConfigError("sigma values must be nonnegative")
        if not self.selectors:
            raise ConfigError("at least one selector is required")
        for name in self.selectors:
            if name not in _SELECTOR_BLOCK_AWARE:
                raise ConfigError(f"unknown selector {name!r}")
        if not 0 <= self.epsilon < 1:
            raise ConfigError("epsilon must lie in [0, 1)")
        if self.a < 1:
            raise ConfigError("a must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be positive")
        if self.success_threshold <= 0:
            raise ConfigError("success threshold must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be positive")
        if self.field_convention not in ("real", "complex"):
            raise ConfigError("field must be 'real' or 'complex'")
        if self.rip_mode not in ("exact", "sampled"):
            raise ConfigError("rip mode must be 'exact' or 'sampled'")

    @property
    def experiment_id(self) -> str:
        return f"{self.kind}-seed{self.master_seed}"


@dataclass(frozen=True)
class TrialRecord:
    experiment_id: str
    trial: int
    m: int
    d: int
    n: int
    k: int
    B: int
    selector: str
    epsilon: float | None
    sigma: float
    seed: str
    iterations: int
    halt_reason: str
    rel_error: float
    success: int
    wall_ms: float

    def as_row(self) -> list[str]:
        return [
            self.experiment_id, str(self.trial), str(self.m), str(self.d),
            str(self.n), str(self.k), str(self.B), self.selector,
            "" if self.epsilon is None else fmt_float(self.epsilon),
            fmt_float(self.sigma), self.seed, str(self.iterations),
            self.halt_reason, fmt_float(self.rel_error), str(self.success),
            fmt_float(self.wall_ms),
        ]


def fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    trial_rows: list[TrialRecord]
    aggregate_columns: list[str]
    aggregate_rows: list[list[str]]


def _serial_mean(values: list[float]) -> float:
    total = 0.0
    for v in values:
        total += v
    return total / len(values)


def _serial_median(values: list[float]) -> float:
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2 == 1:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2


def _point_task(args: tuple) -> list[TrialRecord]:
    """All trials of one sweep point; a top-level function so worker pools
    can pickle it.

    BLAS thread pools are pinned to one thread for the duration: the solves
    are small, and letting two pools (the kernel's and numpy's) spin up
    threads per call costs far more than it buys.
    """
    with threadpool_limits(limits=1):
        return _point_trials(args)


def _point_trials(args: tuple) -> list[TrialRecord]:
    (config, point_index, m_val, k_val, sigma_val) = args
    n = config.n
    D = overcomplete_dft(config.d, config.redundancy, config.B)
    selectors = {
        name: make_selector(name, config.epsilon) for name in config.selectors
    }
    halt = HaltingPolicy(max_iterations=config.max_iterations)
    rows: list[TrialRecord] = []
    for trial in range(config.trials):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=(config.master_seed, point_index, trial))
        )
        seed_label = f"{config.master_seed}-{point_index}-{trial}"
        M = gaussian_sensing(m_val, config.d, rng)
        coeffs = clustered_block_coeffs(
            n, config.B, k_val, config.min_gap, rng, config.field_convention
        )
        x = D.array @ coeffs.values
        y = M.array @ x
        if sigma_val > 0:
            y = y + awgn(m_val, sigma_val, config.field_convention, rng)
        x_norm = float(np.linalg.norm(x))

        for name in config.selectors:
            if _SELECTOR_BLOCK_AWARE[name]:
                prob_k, prob_b = k_val, config.B
            else:
                prob_k, prob_b = k_val * config.B, 1
            sel = selectors[name]
            start = time.perf_counter()
            try:
                problem = RecoveryProblem(y, M, D, prob_k, prob_b, config.a)
                trace = sscosamp(problem, sel, sel, halt)
                wall_ms = (time.perf_counter() - start) * 1e3
                err = float(np.linalg.norm(trace.estimate - x))
                rel_error = err / x_norm if x_norm > 0 else err
                iterations, halt_reason = trace.n_iterations, trace.halt_reason
                success = int(rel_error <= config.success_threshold)
            except Exception as exc:
                # One bad trial must not abort the sweep; flag and move on.
                wall_ms = (time.perf_counter() - start) * 1e3
                iterations, halt_reason = 0, f"error: {exc}"
                rel_error, success = float("nan"), 0
            rows.append(TrialRecord(
                config.experiment_id, trial, m_val, config.d, n, k_val,
                config.B, name,
                config.epsilon if selector_uses_epsilon(name) else None,
                sigma_val, seed_label, iterations, halt_reason,
                rel_error, success, wall_ms,
            ))
    return rows


def _run_points(config: ExperimentConfig, points: list[tuple]) -> list[TrialRecord]:
    tasks = [(config, idx, m, k, s) for idx, (m, k, s) in enumerate(points)]
    rows: list[TrialRecord] = []
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for chunk in pool.map(_point_task, tasks):
                rows.extend(chunk)
    else:
        for task in tasks:
            rows.extend(_point_task(task))
    return rows


def _group(rows: list[TrialRecord], key_fn) -> dict:
    groups: dict = {}
    for row in rows:
        groups.setdefault(key_fn(row), []).append(row)
    return groups


def run_recovery_rate(config: ExperimentConfig) -> ExperimentResult:
    """Noiseless recovery rate against the number of measurements, one
    series per selector."""
    config.validate()
    if len(config.k) != 1:
        raise ConfigError("recovery-rate sweeps m at a single k")
    points = [(m, config.k[0], 0.0) for m in config.m]
    rows = _run_points(config, points)

    agg_cols = ["m", "selector", "trials", "successes", "recovery_rate"]
    agg_rows = []
    for m in config.m:
        for name in config.selectors:
            group = [r for r in rows if r.m == m and r.selector == name]
            successes = sum(r.success for r in group)
            agg_rows.append([
                str(m), name, str(len(group)), str(successes),
                fmt_float(successes / len(group)),
            ])
    return ExperimentResult(config, rows, agg_cols, agg_rows)


def run_noise_sweep(config: ExperimentConfig) -> ExperimentResult:
    """Relative recovery error against the noise level at fixed m and k."""
    config.validate()
    if len(config.k) != 1 or len(config.m) != 1:
        raise ConfigError("noise-sweep sweeps sigma at a single (m, k)")
    points = [(config.m[0], config.k[0], s) for s in config.sigma]
    rows = _run_points(config, points)

    agg_cols = ["sigma", "selector", "trials", "median_rel_error", "mean_rel_error"]
    agg_rows = []
    for s in config.sigma:
        for name in config.selectors:
            errors = [r.rel_error for r in rows if r.sigma == s and r.selector == name]
            agg_rows.append([
                fmt_float(s), name, str(len(errors)),
                fmt_float(_serial_median(errors)), fmt_float(_serial_mean(errors)),
            ])
    return ExperimentResult(config, rows, agg_cols, agg_rows)


def run_k_sweep(config: ExperimentConfig) -> ExperimentResult:
    """Squared recovery error against the block sparsity at fixed m and
    sigma."""
    config.validate()
    if len(config.m) != 1 or len(config.sigma) != 1:
        raise ConfigError("k-sweep sweeps k at a single (m, sigma)")
    points = [(config.m[0], k, config.sigma[0]) for k in config.k]
    rows = _run_points(config, points)

    agg_cols = ["k", "selector", "trials", "median_sq_error", "mean_sq_error"]
    agg_rows = []
    for k in config.k:
        for name in config.selectors:
            sq = [r.rel_error**2 for r in rows if r.k == k and r.selector == name]
            agg_rows.append([
                str(k), name, str(len(sq)),
                fmt_float(_serial_median(sq)), fmt_float(_serial_mean(sq)),
            ])
    return ExperimentResult(config, rows, agg_cols, agg_rows)


def run_projection_audit(config: ExperimentConfig) -> ExperimentResult:
    """Empirical near-optimality constants per selector on the configured
    (tiny) dictionary."""
    config.validate()
    if len(config.k) != 1:
        raise ConfigError("projection-audit uses a single k")
    k = config.k[0]
    D = overcomplete_dft(config.d, config.redundancy, config.B)

    agg_cols = ["selector", "k", "B", "trials", "skipped", "C_hat", "C_tilde_hat", "status"]
    agg_rows = []
    for name in config.selectors:
        if _SELECTOR_BLOCK_AWARE[name]:
            eff_k, eff_b = k, config.B
        else:
            eff_k, eff_b = k * config.B, 1
        sel = make_selector(name, config.epsilon)
        try:
            report = estimate_near_optimality(
                sel, D, eff_k, eff_b, config.trials, config.master_seed
            )
            agg_rows.append([
                name, str(eff_k), str(eff_b), str(report.trials),
                str(report.skipped), fmt_float(report.c_hat),
                fmt_float(report.c_tilde_hat), "ok",
            ])
        except InfeasibleBruteForceError as exc:
            agg_rows.append([name, str(eff_k), str(eff_b), "0", "0", "", "",
                             f"infeasible-bruteforce: {exc}"])
    return ExperimentResult(config, [], agg_cols, agg_rows)


def run_rip_probe(config: ExperimentConfig) -> dict:
    """Isometry-constant estimate for a seeded Gaussian/DFT instance."""
    config.validate()
    if len(config.k) != 1 or len(config.m) != 1:
        raise ConfigError("rip-probe uses a single (m, k)")
    D = overcomplete_dft(config.d, config.redundancy, config.B)
    M = gaussian_sensing(config.m[0], config.d, config.master_seed)
    if config.rip_mode == "exact":
        est = exact_drip(M, D, config.k[0], config.B)
    else:
        est = sampled_drip_lower_bound(
            M, D, config.k[0], config.B, config.rip_trials, config.master_seed
        )
    return {
        "mode": est.mode, "delta": est.delta, "k": est.k, "B": est.block_size,
        "supports_examined": est.supports_examined,
        "d": config.d, "n": config.n, "m": config.m[0],
    }


def run_theory_probe(config: ExperimentConfig) -> dict:
    """Evaluate the convergence condition, threshold, contraction constants
    and derived quantities for the configured constants."""
    config.validate()
    out: dict = {
        "C_k": config.C_k, "C_tilde_2k": config.C_tilde_2k, "gamma": config.gamma,
        "condition_holds": check_convergence_condition(
            config.C_k, config.C_tilde_2k, config.gamma
        ),
    }
    eps = epsilon_threshold(config.C_k, config.C_tilde_2k, config.gamma)
    out["epsilon_threshold"] = eps if eps is not None else ""
    try:
        consts = iteration_constants(
            config.delta_3zp1k, config.delta_zp1k, config.delta_3zk,
            config.C_k, config.C_tilde_2k, config.gamma,
        )
        out.update({
            "rho1": consts.rho1, "rho2": consts.rho2, "rho": consts.rho,
            "eta1": consts.eta1, "eta2": consts.eta2, "eta": consts.eta,
            "alpha_proof": consts.alpha_proof,
        })
        if config.norm_e > 0 and consts.rho < 1:
            out["t_star"] = t_star(config.norm_x, config.norm_e, consts.rho)
    except Exception as exc:
        out["constants_error"] = str(exc)
    if config.sigma and config.sigma[0] >= 0 and config.n > 1:
        out["noise_projection_bound"] = noise_projection_bound(NoiseBoundParams(
            config.beta, config.zeta, config.B, config.k[0], config.n,
            config.sigma[0], config.delta_3zk,
        ))
    return out


def write_csv(path: Path, columns: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)


def write_outputs(result: ExperimentResult) -> list[Path]:
    """Write the trial CSV, the aggregate CSV and the manifest next to the
    configured output path; returns the written paths."""
    config = result.config
    if config.out is None:
        raise ConfigError("no output path configured")
    out = Path(config.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    written = []
    if result.trial_rows:
        write_csv(out, TRIAL_COLUMNS, [r.as_row() for r in result.trial_rows])
        written.append(out)
        agg_path = out.with_name(out.stem + "_aggregate.csv")
    else:
        agg_path = out
    write_csv(agg_path, result.aggregate_columns, result.aggregate_rows)
    if agg_path not in written:
        written.append(agg_path)
    manifest = write_manifest(config, out)
    written.append(manifest)
    return written


def write_manifest(config: ExperimentConfig, out: Path) -> Path:
    path = Path(str(out) + ".manifest")
    lines = [
        f"schema_version={SCHEMA_VERSION}",
        f"code_version={__version__}",
        f"kernel_backend={kernel_backend()}",
        f"kind={config.kind}",
        f"d={config.d}",
        f"redundancy={config.redundancy}",
        f"n={config.n}",
        f"B={config.B}",
        f"k={','.join(str(v) for v in config.k)}",
        f"m={','.join(str(v) for v in config.m)}",
        f"sigma={','.join(fmt_float(v) for v in config.sigma)}",
        f"selectors={','.join(config.selectors)}",
        f"epsilon={fmt_float(config.epsilon)}",
        f"a={config.a}",
        f"trials={config.trials}",
        f"master_seed={config.master_seed}",
        f"success_threshold={fmt_float(config.success_threshold)}",
        f"min_gap={config.min_gap}",
        f"max_iterations={config.max_iterations}",
        f"field={config.field_convention}",
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


RUNNERS = {
    "recovery-rate": run_recovery_rate,
    "noise-sweep": run_noise_sweep,
    "k-sweep": run_k_sweep,
    "projection-audit": run_projection_audit,
}

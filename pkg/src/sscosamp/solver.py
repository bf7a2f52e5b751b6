"""The signal-space CoSaMP engine.

One parameterized loop covers both the unstructured and the block-sparse
variant: each iteration correlates the residual back into signal space,
expands the support with a selector targeting a*k blocks, solves a
support-constrained least-squares problem, shrinks back to k blocks with a
second selector, and re-projects.  Block size 1 recovers the unstructured
algorithm exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    Dictionary,
    SensingMatrix,
    Support,
    constrained_least_squares,
    project_onto_range,
)
from .selectors import SupportSelector


@dataclass(frozen=True)
class RecoveryProblem:
    """Everything one solver run consumes: measurements y = M x + e, the
    dictionary, the target block sparsity k under block size B, and the
    support-expansion multiplier a."""

    y: np.ndarray
    M: SensingMatrix
    D: Dictionary
    k: int
    B: int = 1
    a: int = 2

    def __post_init__(self):
        y = np.asarray(self.y)
        if y.shape != (self.M.m,):
            raise ValueError(f"y has shape {y.shape}, expected ({self.M.m},)")
        if self.M.d != self.D.d:
            raise ValueError("sensing matrix and dictionary dimensions differ")
        if self.B < 1 or self.D.n % self.B != 0:
            raise ValueError(f"block size {self.B} does not partition {self.D.n} atoms")
        if not 1 <= self.k <= self.D.n // self.B:
            raise ValueError(f"sparsity {self.k} out of range")
        if self.a < 1:
            raise ValueError("support-expansion multiplier a must be >= 1")
        object.__setattr__(self, "y", y)

    @property
    def n_blocks(self) -> int:
        return self.D.n // self.B


@dataclass(frozen=True)
class HaltingPolicy:
    """Stop on whichever triggers first: iteration budget, small residual,
    or stalled residual decrease.

    ``residual_tolerance`` of None resolves to 1e-6 * ||y||_2 at run time;
    ``stall_tolerance`` is the minimum relative decrease of the residual
    norm per iteration.
    """

    max_iterations: int = 50
    residual_tolerance: float | None = None
    stall_tolerance: float = 1e-6

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.residual_tolerance is not None and self.residual_tolerance < 0:
            raise ValueError("residual_tolerance must be nonnegative")
        if self.stall_tolerance < 0:
            raise ValueError("stall_tolerance must be nonnegative")

    def resolved_tolerance(self, y_norm: float) -> float:
        if self.residual_tolerance is not None:
            return self.residual_tolerance
        return 1e-6 * y_norm


@dataclass(frozen=True)
class IterationRecord:
    t: int
    support_expanded: Support
    support: Support
    residual_norm: float
    estimate_norm: float
    error_to_truth: float | None = None


@dataclass(frozen=True)
class SolverTrace:
    iterations: tuple[IterationRecord, ...]
    estimate: np.ndarray
    halt_reason: str
    final_support: Support

    @property
    def n_iterations(self) -> int:
        return len(self.iterations)

    def residual_norms(self) -> np.ndarray:
        return np.array([rec.residual_norm for rec in self.iterations])

    def errors_to_truth(self) -> np.ndarray:
        return np.array([rec.error_to_truth for rec in self.iterations], dtype=float)


def correlate_residual(M: SensingMatrix, y_r: np.ndarray) -> np.ndarray:
    """Adjoint application M* y_r, mapping a residual back to signal space."""
    y_r = np.asarray(y_r)
    if y_r.shape != (M.m,):
        raise ValueError(f"residual has shape {y_r.shape}, expected ({M.m},)")
    return M.adjoint_apply(y_r)


def sscosamp(
    problem: RecoveryProblem,
    expand: SupportSelector,
    shrink: SupportSelector,
    halt: HaltingPolicy | None = None,
    x_true: np.ndarray | None = None,
) -> SolverTrace:
    """Run the greedy signal-space recovery loop.

    ``expand`` is called with target a*k blocks on the back-projected
    residual; ``shrink`` with target k blocks on the intermediate estimate.
    The trace records every iteration; ground-truth errors are filled in
    when ``x_true`` is supplied.
    """
    if halt is None:
        halt = HaltingPolicy()
    M, D, y = problem.M, problem.D, problem.y
    k, B, a = problem.k, problem.B, problem.a

    y_norm = float(np.linalg.norm(y))
    tol = halt.resolved_tolerance(y_norm)

    support = Support((), B)
    estimate = np.zeros(D.d, dtype=np.result_type(D.array.dtype, y.dtype))
    residual = y.copy()
    prev_res_norm = y_norm

    records: list[IterationRecord] = []
    halt_reason = "max_iterations"
    for t in range(1, halt.max_iterations + 1):
        delta = expand.select(D, correlate_residual(M, residual), a * k, B)
        expanded = support.union(delta)
        x_p, _ = constrained_least_squares(M, D, expanded, y)
        support = shrink.select(D, x_p, k, B)
        estimate = project_onto_range(D, support, x_p)
        residual = y - M.array @ estimate
        res_norm = float(np.linalg.norm(residual))

        err = float(np.linalg.norm(estimate - x_true)) if x_true is not None else None
        records.append(
            IterationRecord(t, expanded, support, res_norm,
                            float(np.linalg.norm(estimate)), err)
        )

        if res_norm <= tol:
            halt_reason = "residual_tolerance"
            break
        decrease = (prev_res_norm - res_norm) / max(prev_res_norm, np.finfo(float).tiny)
        if decrease < halt.stall_tolerance:
            halt_reason = "stall"
            break
        prev_res_norm = res_norm

    return SolverTrace(tuple(records), estimate, halt_reason, support)

"""Exact (enumerated) and sampled estimation of the dictionary-restricted
isometry constant, plus numerical verification of its operator-norm
consequences.

The constant delta is the smallest value with
(1 - delta) ||D a||^2 <= ||M D a||^2 <= (1 + delta) ||D a||^2 over the
(block-)sparse coefficient class; on tiny instances it is computed exactly
by sweeping every support and taking extremal Rayleigh quotients on the
column span.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RANK_CUTOFF, Dictionary, SensingMatrix, Support, restrict_columns
from .generate import ExperimentSeed
from .selectors import (
    DEFAULT_ENUMERATION_CAP,
    check_enumeration_feasible,
    iter_block_supports,
)


@dataclass(frozen=True)
class RipEstimate:
    delta: float
    mode: str  # "exact" | "sampled-lower-bound"
    k: int
    block_size: int
    supports_examined: int


@dataclass(frozen=True)
class RipLemmaReport:
    """Worst margins (inequality slack, >= 0 means the inequality held) of
    the operator-norm consequences checked with the exact constant."""

    passed: bool
    delta: float
    margin_measure_norm: float
    margin_gram_deviation: float
    margin_cross_support: float
    margin_split_inequality: float
    supports_checked: int
    pairs_checked: int


def _support_rayleigh_extremes(M: SensingMatrix, D: Dictionary, T: Support) -> tuple[float, float]:
    """Extremes of ||M v||^2 / ||v||^2 over nonzero v in range(D_T)."""
    sub = restrict_columns(D, T)
    u, s, _ = np.linalg.svd(sub, full_matrices=False)
    rank = int(np.sum(s > RANK_CUTOFF * s[0])) if s.size and s[0] > 0 else 0
    if rank == 0:
        return 1.0, 1.0
    basis = u[:, :rank]
    mb = M.array @ basis
    evals = np.linalg.eigvalsh(mb.conj().T @ mb)
    return float(evals[0]), float(evals[-1])


def exact_drip(
    M: SensingMatrix,
    D: Dictionary,
    k: int,
    B: int = 1,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> RipEstimate:
    """Exact isometry constant at (block-)sparsity k by full support
    enumeration.

    Directions in the null space of D_T put no constraint on the quotient
    and are excluded.
    """
    if B < 1 or D.n % B != 0:
        raise ValueError(f"block size {B} does not partition {D.n} atoms")
    n_blocks = D.n // B
    if not 1 <= k <= n_blocks:
        raise ValueError(f"sparsity {k} out of range for {n_blocks} blocks")
    check_enumeration_feasible(n_blocks, k, enumeration_cap)

    delta = 0.0
    examined = 0
    for blocks in iter_block_supports(n_blocks, k):
        lam_min, lam_max = _support_rayleigh_extremes(M, D, Support.from_blocks(blocks, B))
        delta = max(delta, lam_max - 1.0, 1.0 - lam_min)
        examined += 1
    return RipEstimate(delta, "exact", k, B, examined)


def sampled_drip_lower_bound(
    M: SensingMatrix,
    D: Dictionary,
    k: int,
    B: int = 1,
    trials: int = 1000,
    seed: int = 0,
) -> RipEstimate:
    """Lower bound on the isometry constant from random sparse draws:
    max over trials of |  ||M D a||^2 / ||D a||^2 - 1 |."""
    if B < 1 or D.n % B != 0:
        raise ValueError(f"block size {B} does not partition {D.n} atoms")
    n_blocks = D.n // B
    if trials > 0 and not 1 <= k <= n_blocks:
        raise ValueError(f"sparsity {k} out of range for {n_blocks} blocks")

    delta = 0.0
    for trial in range(trials):
        rng = ExperimentSeed(seed, trial).rng()
        blocks = rng.choice(n_blocks, size=k, replace=False)
        support = Support.from_blocks(blocks.tolist(), B)
        atoms = support.as_array()
        coeffs = np.zeros(D.n, dtype=D.array.dtype)
        if D.is_complex:
            coeffs[atoms] = rng.standard_normal(len(atoms)) + 1j * rng.standard_normal(len(atoms))
        else:
            coeffs[atoms] = rng.standard_normal(len(atoms))
        v = D.array @ coeffs
        denom = float(np.linalg.norm(v) ** 2)
        if denom < 1e-24:
            continue
        ratio = float(np.linalg.norm(M.array @ v) ** 2) / denom
        delta = max(delta, abs(ratio - 1.0))
    return RipEstimate(delta, "sampled-lower-bound", k, B, trials)


def verify_rip_lemmas(
    M: SensingMatrix,
    D: Dictionary,
    k: int,
    B: int = 1,
    vector_pairs: int = 20,
    seed: int = 0,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> RipLemmaReport:
    """Check the operator-norm consequences of the isometry property with
    the exact constant:

    - ||M P_T||^2 <= 1 + delta_k and ||P_T (I - M* M) P_T|| <= delta_k for
      every support of at most k blocks;
    - ||P_T1 (I - M* M) P_T2|| <= delta_k for support pairs with
      k1 + k2 <= k blocks;
    - the split bound ||x1 + x2||^2 <= (1 + c) ||x1||^2 + (1 + 1/c) ||x2||^2
      on random vector pairs for c in {0.5, 1, 2}.

    Margins are inequality slack; all nonnegative (up to roundoff) means the
    report passes.
    """
    delta = exact_drip(M, D, k, B, enumeration_cap).delta
    eye = np.eye(D.d)
    deviation = eye - M.array.conj().T @ M.array

    def projector(blocks: tuple[int, ...]) -> np.ndarray:
        sub = restrict_columns(D, Support.from_blocks(blocks, B))
        if sub.shape[1] == 0:
            return np.zeros((D.d, D.d))
        u, s, _ = np.linalg.svd(sub, full_matrices=False)
        rank = int(np.sum(s > RANK_CUTOFF * s[0])) if s[0] > 0 else 0
        q = u[:, :rank]
        return q @ q.conj().T

    n_blocks = D.n // B
    margin_measure = np.inf
    margin_gram = np.inf
    supports_checked = 0
    projectors: dict[tuple[int, ...], np.ndarray] = {}
    for j in range(1, k + 1):
        for blocks in iter_block_supports(n_blocks, j):
            p = projector(blocks)
            projectors[blocks] = p
            norm_mp = np.linalg.norm(M.array @ p, ord=2)
            margin_measure = min(margin_measure, (1 + delta) - norm_mp**2)
            norm_dev = np.linalg.norm(p @ deviation @ p, ord=2)
            margin_gram = min(margin_gram, delta - norm_dev)
            supports_checked += 1

    margin_cross = np.inf
    pairs_checked = 0
    for j1 in range(1, k):
        for blocks1 in iter_block_supports(n_blocks, j1):
            p1 = projectors[blocks1]
            for j2 in range(1, k - j1 + 1):
                for blocks2 in iter_block_supports(n_blocks, j2):
                    p2 = projectors[blocks2]
                    norm_cross = np.linalg.norm(p1 @ deviation @ p2, ord=2)
                    margin_cross = min(margin_cross, delta - norm_cross)
                    pairs_checked += 1

    rng = ExperimentSeed(seed).rng()
    margin_split = np.inf
    for _ in range(vector_pairs):
        if D.is_complex:
            x1 = rng.standard_normal(D.d) + 1j * rng.standard_normal(D.d)
            x2 = rng.standard_normal(D.d) + 1j * rng.standard_normal(D.d)
        else:
            x1 = rng.standard_normal(D.d)
            x2 = rng.standard_normal(D.d)
        for c in (0.5, 1.0, 2.0):
            bound = (1 + c) * np.linalg.norm(x1) ** 2 + (1 + 1 / c) * np.linalg.norm(x2) ** 2
            margin_split = min(margin_split, float(bound - np.linalg.norm(x1 + x2) ** 2))

    tol = 1e-10
    passed = all(
        m >= -tol for m in (margin_measure, margin_gram, margin_cross, margin_split)
    )
    return RipLemmaReport(
        passed, delta,
        float(margin_measure), float(margin_gram),
        float(margin_cross) if pairs_checked else float("inf"),
        margin_split, supports_checked, pairs_checked,
    )

"""Support-selection schemes used as the approximate projections inside the
solver: brute-force optimal (the correctness oracle), thresholding, OMP,
block-OMP, and epsilon-extension block-OMP, plus empirical estimation of the
near-optimality constants.

All selectors are deterministic, break score ties toward the lowest block
index, and return block-aligned supports when the block size exceeds one.
Correlation scores divide by column norms so unnormalized dictionaries
behave sensibly.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from . import backend
from .core import Dictionary, Support, span_basis
from .exceptions import InfeasibleBruteForceError
from .generate import ExperimentSeed

DEFAULT_ENUMERATION_CAP = 2_000_000

# Correlation-squared slack so self- and duplicate-column correlations
# survive rounding in the >= 1 - eps^2 test.
CORR_SLACK = 1e-12


@dataclass(frozen=True)
class SelectionInfo:
    """Per-run metadata for selectors whose output size is instance-dependent."""

    selection_order: tuple[int, ...]
    realized_zeta: int
    exhausted: bool = False


@dataclass(frozen=True)
class NearOptimalityReport:
    """Empirical worst-case near-optimality constants against the brute-force
    optimal projection.

    ``c_hat`` is the max over trials of residual-energy ratio (>= 1 for a
    correct oracle), ``c_tilde_hat`` the min over trials of captured-energy
    ratio (<= 1).
    """

    c_hat: float
    c_tilde_hat: float
    trials: int
    skipped: int
    k: int
    block_size: int


class SupportSelector(ABC):
    """A deterministic map (D, z, k, B) -> Support of at most zeta * k blocks."""

    name: str = "selector"
    zeta: float = 1.0

    @abstractmethod
    def select(self, D: Dictionary, z: np.ndarray, k: int, B: int = 1) -> Support:
        ...

    def select_with_info(
        self, D: Dictionary, z: np.ndarray, k: int, B: int = 1
    ) -> tuple[Support, SelectionInfo]:
        support = self.select(D, z, k, B)
        return support, SelectionInfo(support.block_indices(), 1)


def _validate_target(D: Dictionary, z: np.ndarray, k: int, B: int) -> int:
    z = np.asarray(z)
    if z.shape != (D.d,):
        raise ValueError(f"signal has shape {z.shape}, expected ({D.d},)")
    if B < 1 or D.n % B != 0:
        raise ValueError(f"block size {B} does not partition {D.n} atoms")
    n_blocks = D.n // B
    if not 0 <= k <= n_blocks:
        raise ValueError(f"target sparsity {k} out of range for {n_blocks} blocks")
    return n_blocks


def iter_block_supports(n_blocks: int, k: int) -> Iterator[tuple[int, ...]]:
    """All k-subsets of block indices in lexicographic order."""
    return combinations(range(n_blocks), k)


def check_enumeration_feasible(n_blocks: int, k: int, cap: int) -> int:
    count = math.comb(n_blocks, k)
    if count > cap:
        raise InfeasibleBruteForceError(
            f"C({n_blocks},{k}) = {count} supports exceeds enumeration cap {cap}"
        )
    return count


def span_bases_for_supports(
    D: Dictionary, supports: Sequence[tuple[int, ...]], B: int
) -> list[np.ndarray]:
    """Orthonormal bases of range(D_T) for each block support."""
    return [span_basis(D, Support.from_blocks(blocks, B)) for blocks in supports]


class BruteForceSelector(SupportSelector):
    """Exhaustive optimal projection: the support minimizing the residual
    energy ||z - P_T z||_2^2 over all k-block supports, ties toward the
    lexicographically smallest block set.
    """

    name = "brute-force"

    def __init__(self, enumeration_cap: int = DEFAULT_ENUMERATION_CAP):
        self.enumeration_cap = enumeration_cap

    def select(self, D: Dictionary, z: np.ndarray, k: int, B: int = 1) -> Support:
        n_blocks = _validate_target(D, z, k, B)
        check_enumeration_feasible(n_blocks, k, self.enumeration_cap)
        best_blocks: tuple[int, ...] = ()
        best_captured = -1.0
        for blocks in iter_block_supports(n_blocks, k):
            q = span_basis(D, Support.from_blocks(blocks, B))
            captured = float(np.linalg.norm(q.conj().T @ z) ** 2)
            if captured > best_captured:
                best_captured = captured
                best_blocks = blocks
        return Support.from_blocks(best_blocks, B)


class ThresholdingSelector(SupportSelector):
    """One-shot selection of the k blocks with the largest normalized
    correlation energy against z.
    """

    name = "thresholding"

    def select(self, D: Dictionary, z: np.ndarray, k: int, B: int = 1) -> Support:
        n_blocks = _validate_target(D, z, k, B)
        scores = np.abs(D.array.conj().T @ z) / D.col_norms
        block_scores = np.sum(scores.reshape(n_blocks, B) ** 2, axis=1)
        # Stable sort keeps the lowest block index first among ties.
        order = np.argsort(-block_scores, kind="stable")[:k]
        return Support.from_blocks(order.tolist(), B)


class OmpSelector(SupportSelector):
    """Orthogonal matching pursuit: k greedy atom selections, residual
    updated by projecting z off the span of the selected atoms.
    """

    name = "omp"

    def select(self, D: Dictionary, z: np.ndarray, k: int, B: int = 1) -> Support:
        if B != 1:
            raise ValueError("omp selects single atoms; use bomp for block targets")
        _validate_target(D, z, k, 1)
        selected, _, _ = backend.select_blocks(D, z, k, 1)
        return Support(tuple(sorted(int(i) for i in selected)))


class BompSelector(SupportSelector):
    """Block-OMP: k greedy block selections scored by per-block correlation
    energy; reduces to OMP when the block size is one.
    """

    name = "bomp"

    def select(self, D: Dictionary, z: np.ndarray, k: int, B: int = 1) -> Support:
        _validate_target(D, z, k, B)
        selected, _, _ = backend.select_blocks(D, z, k, B)
        return Support.from_blocks(selected.tolist(), B)


class EpsBompSelector(SupportSelector):
    """Epsilon-extension block-OMP.

    Each round picks the best block not yet inside the extended support,
    then extends that support with every block holding an atom whose squared
    normalized correlation with the round's most correlated atom reaches
    1 - eps^2.  The returned support is the extended one, so its size can
    exceed k blocks; the realized inflation is reported per run.
    """

    name = "eps-bomp"

    def __init__(self, epsilon: float):
        if not 0.0 <= epsilon < 1.0:
            raise ValueError("epsilon must lie in [0, 1)")
        self.epsilon = float(epsilon)

    def select(self, D: Dictionary, z: np.ndarray, k: int, B: int = 1) -> Support:
        return self.select_with_info(D, z, k, B)[0]

    def select_with_info(
        self, D: Dictionary, z: np.ndarray, k: int, B: int = 1
    ) -> tuple[Support, SelectionInfo]:
        _validate_target(D, z, k, B)
        selected, extended, exhausted = backend.select_blocks(D, z, k, B, eps=self.epsilon)
        support = Support.from_blocks(extended.tolist(), B)
        zeta = max(1, math.ceil(len(support) / (k * B))) if k > 0 else 1
        info = SelectionInfo(tuple(int(b) for b in selected), zeta, exhausted)
        return support, info


def epsilon_block_extension(
    D: Dictionary, T: Support, epsilon: float, block_size: int | None = None
) -> Support:
    """Union of all blocks holding an atom whose squared normalized
    correlation with some atom of T reaches 1 - epsilon^2.

    Always covers the blocks containing T (an atom correlates perfectly with
    itself).
    """
    if not 0.0 <= epsilon < 1.0:
        raise ValueError("epsilon must lie in [0, 1)")
    B = D.block_size if block_size is None else block_size
    if D.n % B != 0:
        raise ValueError(f"block size {B} does not partition {D.n} atoms")
    n_blocks = D.n // B
    thresh = (1.0 - epsilon**2) - CORR_SLACK
    hit = np.zeros(n_blocks, dtype=bool)
    for j in T.atoms:
        if j >= D.n:
            raise ValueError(f"atom {j} out of range")
        gram_col = D.array.conj().T @ D.array[:, j]
        corr2 = (np.abs(gram_col) / D.col_norms) ** 2 / D.col_norms[j] ** 2
        hit |= np.any(corr2.reshape(n_blocks, B) >= thresh, axis=1)
    return Support.from_blocks(np.flatnonzero(hit).tolist(), B)


def optimal_selector_bruteforce(
    D: Dictionary, z: np.ndarray, k: int, B: int = 1,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> Support:
    return BruteForceSelector(enumeration_cap).select(D, z, k, B)


def thresholding_selector(D: Dictionary, z: np.ndarray, k: int, B: int = 1) -> Support:
    return ThresholdingSelector().select(D, z, k, B)


def omp_selector(D: Dictionary, z: np.ndarray, k: int) -> Support:
    return OmpSelector().select(D, z, k, 1)


def bomp_selector(D: Dictionary, z: np.ndarray, k: int, B: int = 1) -> Support:
    return BompSelector().select(D, z, k, B)


def eps_bomp_selector(
    D: Dictionary, z: np.ndarray, k: int, B: int, epsilon: float
) -> Support:
    return EpsBompSelector(epsilon).select(D, z, k, B)


def _random_test_vector(rng: np.random.Generator, d: int, complex_field: bool) -> np.ndarray:
    if complex_field:
        return rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return rng.standard_normal(d)


def estimate_near_optimality(
    selector: SupportSelector,
    D: Dictionary,
    k: int,
    B: int = 1,
    trials: int = 100,
    rng_seed: int = 0,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> NearOptimalityReport:
    """Estimate the selector's near-optimality constants by drawing random
    test vectors and comparing residual / captured energies against the
    brute-force optimal projection.

    Trials whose optimal residual energy falls below 1e-12 leave the
    residual ratio undefined and are skipped (counted in ``skipped``).
    """
    n_blocks = D.n // B
    check_enumeration_feasible(n_blocks, k, enumeration_cap)
    supports = list(iter_block_supports(n_blocks, k))
    bases = span_bases_for_supports(D, supports, B)

    c_hat = -np.inf
    c_tilde_hat = np.inf
    counted = 0
    skipped = 0
    for trial in range(trials):
        rng = ExperimentSeed(rng_seed, trial).rng()
        z = _random_test_vector(rng, D.d, D.is_complex)
        best_idx = 0
        best_captured = -1.0
        for idx, q in enumerate(bases):
            captured = float(np.linalg.norm(q.conj().T @ z) ** 2)
            if captured > best_captured:
                best_captured = captured
                best_idx = idx
        q_opt = bases[best_idx]
        res_opt = float(np.linalg.norm(z - q_opt @ (q_opt.conj().T @ z)) ** 2)
        cap_opt = best_captured
        if res_opt < 1e-12 or cap_opt <= 0.0:
            skipped += 1
            continue
        chosen = selector.select(D, z, k, B)
        q_sel = span_basis(D, chosen)
        res_sel = float(np.linalg.norm(z - q_sel @ (q_sel.conj().T @ z)) ** 2)
        cap_sel = float(np.linalg.norm(q_sel.conj().T @ z) ** 2)
        c_hat = max(c_hat, res_sel / res_opt)
        c_tilde_hat = min(c_tilde_hat, cap_sel / cap_opt)
        counted += 1

    if counted == 0:
        return NearOptimalityReport(float("nan"), float("nan"), 0, skipped, k, B)
    return NearOptimalityReport(float(c_hat), float(c_tilde_hat), counted, skipped, k, B)

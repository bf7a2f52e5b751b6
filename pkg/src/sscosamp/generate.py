"""Seeded generators for the experimental ensemble: Gaussian sensing
matrices, overcomplete DFT dictionaries, clustered block-sparse
coefficients, and white Gaussian noise.

Every generator is a pure function of its seed; per-trial streams derive
from (master_seed, trial_index) so parallel trials stay independent and
reruns are byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dictionary, SensingMatrix, SparseCoefficients, Support
from .exceptions import GenerationError


@dataclass(frozen=True)
class ExperimentSeed:
    """Deterministic per-trial RNG stream keyed by (master_seed, trial_index)."""

    master_seed: int
    trial_index: int = 0

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence(entropy=(self.master_seed, self.trial_index))
        )


SeedLike = "int | ExperimentSeed | np.random.Generator"


def _resolve_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, ExperimentSeed):
        return seed.rng()
    return ExperimentSeed(int(seed)).rng()


def gaussian_sensing(m: int, d: int, seed) -> SensingMatrix:
    """m x d matrix with i.i.d. N(0, 1/m) entries, so ||Mx|| ~ ||x|| in
    expectation."""
    if m < 1 or d < 1:
        raise ValueError("matrix dimensions must be positive")
    rng = _resolve_rng(seed)
    return SensingMatrix(rng.normal(0.0, 1.0 / np.sqrt(m), size=(m, d)))


def overcomplete_dft(d: int, redundancy: int, block_size: int = 1) -> Dictionary:
    """d x (redundancy * d) DFT frame with unit-norm columns.

    Column l has entries exp(-2*pi*i*j*l/n) / sqrt(d) for row j; redundancy 1
    gives the unitary DFT.
    """
    if redundancy < 1:
        raise ValueError("redundancy must be a positive integer")
    n = redundancy * d
    j = np.arange(d)[:, None]
    l = np.arange(n)[None, :]
    entries = np.exp(-2j * np.pi * j * l / n) / np.sqrt(d)
    return Dictionary(entries, block_size)


def clustered_block_coeffs(
    n: int,
    B: int,
    k: int,
    min_gap: int = 1,
    seed=0,
    field: str = "real",
) -> SparseCoefficients:
    """k nonzero blocks of width B placed uniformly at random with pairwise
    separation of at least ``min_gap`` blocks (min_gap 1 means non-adjacent),
    entries i.i.d. standard normal per component (circularly symmetric when
    complex).
    """
    if n % B != 0:
        raise ValueError(f"{n} atoms not divisible by block size {B}")
    n_blocks = n // B
    if not 1 <= k <= n_blocks:
        raise GenerationError(f"cannot place {k} blocks among {n_blocks}")
    if min_gap < 0:
        raise ValueError("min_gap must be nonnegative")
    if k + (k - 1) * min_gap > n_blocks:
        raise GenerationError(
            f"cannot place {k} blocks with gap {min_gap} among {n_blocks} blocks"
        )
    rng = _resolve_rng(seed)
    # Gap transform: subtracting the extra separation beyond distinctness
    # maps constrained placements bijectively onto plain k-subsets, so a
    # uniform subset draw stays uniform over valid placements.
    free = n_blocks - (k - 1) * min_gap
    base = np.sort(rng.choice(free, size=k, replace=False))
    blocks = base + min_gap * np.arange(k)

    support = Support.from_blocks(blocks.tolist(), B)
    values = np.zeros(n, dtype=complex if field == "complex" else float)
    atoms = support.as_array()
    if field == "complex":
        # Standard normal per component (real and imaginary parts each N(0,1)).
        values[atoms] = rng.standard_normal(len(atoms)) + 1j * rng.standard_normal(len(atoms))
    elif field == "real":
        values[atoms] = rng.standard_normal(len(atoms))
    else:
        raise ValueError(f"unknown field {field!r}")
    return SparseCoefficients(values, support)


def awgn(length: int, sigma: float, field: str = "real", seed=0) -> np.ndarray:
    """Zero-mean white Gaussian noise with per-component variance sigma^2
    (E|e_i|^2 = sigma^2, circularly symmetric when complex)."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = _resolve_rng(seed)
    if field == "complex":
        return sigma * (
            rng.standard_normal(length) + 1j * rng.standard_normal(length)
        ) / np.sqrt(2.0)
    if field == "real":
        return sigma * rng.standard_normal(length)
    raise ValueError(f"unknown field {field!r}")

"""Computable forms of the recovery theory: the oracle estimator and its
error band, the convergence condition and its threshold on the isometry
constant, the per-iteration contraction constants, the iteration count to
reach the noise floor, and the worst-case noise-projection bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Dictionary, SensingMatrix, Support, constrained_least_squares
from .exceptions import InfeasibleBruteForceError, NoConvergenceError, RegimeViolationError
from .selectors import (
    DEFAULT_ENUMERATION_CAP,
    check_enumeration_feasible,
    iter_block_supports,
    span_bases_for_supports,
)


@dataclass(frozen=True)
class TheoryConstants:
    """The quantities entering the per-iteration contraction
    ||x^t - x|| <= rho ||x^{t-1} - x|| + eta ||P_{T_e} M* e||."""

    delta_3zp1k: float
    delta_zp1k: float
    delta_3zk: float
    C_k: float
    C_tilde_2k: float
    gamma: float
    alpha_proof: float
    rho1: float
    rho2: float
    eta1: float
    eta2: float

    @property
    def rho(self) -> float:
        return self.rho1 * self.rho2

    @property
    def eta(self) -> float:
        return self.eta1 + self.rho1 * self.eta2

    @property
    def converges(self) -> bool:
        return self.rho < 1.0


@dataclass(frozen=True)
class NoiseBoundParams:
    """Inputs of the high-probability bound on ||P_{T_e} M* e||_2."""

    beta: float
    zeta: float
    B: int
    k: int
    n: int
    sigma: float
    delta_3zk: float

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.zeta < 1:
            raise ValueError("zeta must be >= 1")
        if min(self.B, self.k, self.n) < 1:
            raise ValueError("B, k, n must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if not 0 <= self.delta_3zk < 1:
            raise ValueError("delta must lie in [0, 1)")


def oracle_estimate(M: SensingMatrix, D: Dictionary, T: Support, y: np.ndarray) -> np.ndarray:
    """Least-squares estimate computed with foreknowledge of the true
    support: D_T (M D_T)^+ y."""
    x_hat, _ = constrained_least_squares(M, D, T, y)
    return x_hat


def oracle_error_bounds(B: int, k: int, sigma: float, delta_k: float) -> tuple[float, float]:
    """Expected squared-error band B*k*sigma^2 / (1 +/- delta_k) of the
    oracle estimator under white noise."""
    if not 0 <= delta_k < 1:
        raise ValueError("delta_k must lie in [0, 1)")
    base = B * k * sigma**2
    return base / (1 + delta_k), base / (1 - delta_k)


def _validate_condition_domain(C_k: float, C_tilde_2k: float, gamma: float) -> None:
    if C_k < 1:
        raise ValueError("C_k must be >= 1")
    if not 0 < C_tilde_2k <= 1:
        raise ValueError("C_tilde_2k must lie in (0, 1]")
    if gamma <= 0:
        raise ValueError("gamma must be positive")


def check_convergence_condition(C_k: float, C_tilde_2k: float, gamma: float) -> bool:
    """True iff (1 + sqrt(C_k))^2 (1 - C_tilde_2k / (1+gamma)^2) < 1."""
    _validate_condition_domain(C_k, C_tilde_2k, gamma)
    return (1 + math.sqrt(C_k)) ** 2 * (1 - C_tilde_2k / (1 + gamma) ** 2) < 1.0


def threshold_quadratic_coeffs(
    C_k: float, C_tilde_2k: float, gamma: float
) -> tuple[float, float, float]:
    """Coefficients (A, B, C) of the quadratic in s = sqrt(delta) whose
    negativity region below its smaller positive root certifies
    convergence."""
    _validate_condition_domain(C_k, C_tilde_2k, gamma)
    p = (1 + math.sqrt(C_k)) ** 2
    u = math.sqrt(C_tilde_2k) / (1 + gamma)
    a = 1 - p * (u + 1) ** 2
    b = 2 * p * (u + 1) * u
    c = 2 * math.sqrt(C_k) + C_k - C_tilde_2k * p / (1 + gamma) ** 2
    return a, b, c


def epsilon_threshold(C_k: float, C_tilde_2k: float, gamma: float) -> float | None:
    """Smaller positive root of the threshold quadratic, certifying
    convergence for delta_{(3 zeta + 1) k} <= epsilon^2; None exactly when
    the convergence condition fails.
    """
    if not check_convergence_condition(C_k, C_tilde_2k, gamma):
        return None
    a, b, c = threshold_quadratic_coeffs(C_k, C_tilde_2k, gamma)
    # a < 0 throughout the domain; the quadratic always has s = 1 as a root,
    # so the discriminant is nonnegative up to rounding.
    disc = max(b * b - 4 * a * c, 0.0)
    return (-b + math.sqrt(disc)) / (2 * a)


def iteration_constants(
    delta_3zp1k: float,
    delta_zp1k: float,
    delta_3zk: float,
    C_k: float,
    C_tilde_2k: float,
    gamma: float,
) -> TheoryConstants:
    """Contraction and noise-amplification constants of the per-iteration
    invariant, in their published closed forms.

    Raises RegimeViolationError when the proof's alpha has a nonpositive
    denominator (the constants are then undefined).
    """
    for name, d in (("delta_3zp1k", delta_3zp1k), ("delta_zp1k", delta_zp1k),
                    ("delta_3zk", delta_3zk)):
        if not 0 <= d < 1:
            raise ValueError(f"{name} must lie in [0, 1)")
    _validate_condition_domain(C_k, C_tilde_2k, gamma)

    sqrt_ck = math.sqrt(C_k)
    s4 = math.sqrt(delta_3zp1k)
    s2 = math.sqrt(delta_zp1k)
    u = math.sqrt(C_tilde_2k / ((1 + gamma) * (1 + gamma)))

    alpha_den = u * (1 - s2) - s4
    if alpha_den <= 0:
        raise RegimeViolationError(
            "alpha denominator nonpositive: isometry constants too large for the regime"
        )
    alpha = s4 / alpha_den

    eta1 = (1 + sqrt_ck) / (1 - delta_3zp1k)
    eta2 = math.sqrt(
        (1 + delta_3zk) / (gamma * (1 + alpha))
        + (1 + delta_zp1k) * C_tilde_2k / (gamma * (1 + alpha) * (1 + gamma))
    )
    rho1 = math.sqrt((1 + sqrt_ck) ** 2 / (1 - delta_3zp1k**2))
    rho2 = math.sqrt(1 - (s4 - u * (1 - s2)) ** 2)
    return TheoryConstants(
        delta_3zp1k, delta_zp1k, delta_3zk, C_k, C_tilde_2k, gamma,
        alpha, rho1, rho2, eta1, eta2,
    )


def t_star(norm_x: float, norm_e: float, rho: float) -> int:
    """Iterations to reach the noise floor: ceil(log(||x||/||e||)/log(1/rho)),
    clamped to at least 1."""
    if not 0 < rho:
        raise ValueError("rho must be positive")
    if rho >= 1:
        raise NoConvergenceError(f"rho = {rho} does not certify convergence")
    if norm_e <= 0:
        raise ValueError("norm_e must be positive")
    if norm_x <= norm_e:
        return 1
    return max(1, math.ceil(math.log(norm_x / norm_e) / math.log(1 / rho)))


def noise_projection_bound(params: NoiseBoundParams) -> float:
    """High-probability bound sqrt((1 + delta) 3 zeta B k) (1 + sqrt(2 (1 + beta) log n)) sigma
    on the worst support-projected back-projection of white noise."""
    lead = math.sqrt((1 + params.delta_3zk) * 3 * params.zeta * params.B * params.k)
    tail = 1 + math.sqrt(2 * (1 + params.beta) * math.log(params.n))
    return lead * tail * params.sigma


def worst_noise_support(
    M: SensingMatrix,
    D: Dictionary,
    e: np.ndarray,
    size: int,
    B: int = 1,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Support, float]:
    """Exhaustive maximizer of ||P_T M* e||_2 over block-aligned supports of
    ``size`` atoms; ties go to the lexicographically first support."""
    e = np.asarray(e)
    if e.shape != (M.m,):
        raise ValueError(f"noise vector has shape {e.shape}, expected ({M.m},)")
    if B < 1 or D.n % B != 0:
        raise ValueError(f"block size {B} does not partition {D.n} atoms")
    if size % B != 0:
        raise ValueError(f"support size {size} is not a whole number of blocks")
    k_blocks = size // B
    n_blocks = D.n // B
    if not 0 < k_blocks <= n_blocks:
        raise ValueError(f"support size {size} out of range")
    check_enumeration_feasible(n_blocks, k_blocks, enumeration_cap)

    back = M.adjoint_apply(e)
    supports = list(iter_block_supports(n_blocks, k_blocks))
    bases = span_bases_for_supports(D, supports, B)
    best_idx = 0
    best_val = -1.0
    for idx, q in enumerate(bases):
        val = float(np.linalg.norm(q.conj().T @ back))
        if val > best_val:
            best_val = val
            best_idx = idx
    return Support.from_blocks(supports[best_idx], B), best_val

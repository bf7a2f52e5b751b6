"""Pure numpy implementation of the greedy block-selection kernel.

This is the fallback twin of the compiled extension in ``_kernels.pyx``;
both implement the same contract and are interchangeable (see ``backend``).

The kernel runs the inner loop shared by OMP, block-OMP and their
epsilon-extension variants: score blocks by normalized residual
correlation, pick the best eligible block (ties to the lowest index),
grow an orthonormal basis of the selected atoms, and recompute the
residual as the projection complement.  With ``eps < 0`` the eligibility
set is simply the unselected blocks; with ``eps >= 0`` each round also
extends an exclusion support with every block containing an atom nearly
parallel to the round's most correlated atom.

The dictionary arrives entrywise-conjugated and C-contiguous (``CD``,
d x n), so correlation vectors are ``CD.T @ r`` on the fast BLAS path and
atom l itself is ``CD[:, l].conj()``.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

# Atoms whose component orthogonal to the current basis falls below this
# fraction of their norm are dependent and do not enlarge the basis.
_BASIS_DROP = 1e-10

# Slack on the squared-correlation threshold so exact duplicates and
# self-correlations survive floating-point rounding.
_CORR_SLACK = 1e-12


def _orthonormal_append(q_cols: list[np.ndarray], v: np.ndarray) -> None:
    """Orthogonalize v against q_cols (two CGS sweeps) and append if independent."""
    scale = np.linalg.norm(v)
    if scale == 0.0:
        return
    w = v.astype(np.result_type(v.dtype, np.float64), copy=True)
    if q_cols:
        qmat = np.column_stack(q_cols)
        for _ in range(2):
            w -= qmat @ (qmat.conj().T @ w)
    nw = np.linalg.norm(w)
    if nw > _BASIS_DROP * scale:
        q_cols.append(w / nw)


def greedy_block_select(
    CD: np.ndarray,
    inv_col_norms: np.ndarray,
    z: np.ndarray,
    k: int,
    B: int,
    eps: float,
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Select up to k blocks greedily from the atoms whose conjugates are
    the columns of CD.

    Returns ``(selected, extended, exhausted)`` where ``selected`` holds the
    chosen block indices in selection order, ``extended`` the sorted block
    indices of the epsilon-extended support (equal to ``sorted(selected)``
    when ``eps < 0``), and ``exhausted`` flags an early return because every
    block entered the extended support before k rounds completed.
    """
    d, n = CD.shape
    n_blocks = n // B
    use_ext = eps >= 0.0
    corr_thresh = (1.0 - eps * eps) - _CORR_SLACK if use_ext else 0.0

    r = z.astype(np.result_type(CD.dtype, z.dtype), copy=True)
    q_cols: list[np.ndarray] = []
    ineligible = np.zeros(n_blocks, dtype=bool)
    extended = np.zeros(n_blocks, dtype=bool)
    selected: list[int] = []
    exhausted = False

    for _ in range(k):
        if np.all(ineligible):
            exhausted = True
            break
        atom_scores = np.abs(CD.T @ r) * inv_col_norms
        block_scores = np.einsum("ij,ij->i", atom_scores.reshape(n_blocks, B),
                                 atom_scores.reshape(n_blocks, B))
        block_scores[ineligible] = -1.0
        b = int(np.argmax(block_scores))
        selected.append(b)

        if use_ext:
            # Most correlated atom of the chosen block, scored on the same
            # residual used to pick the block.
            i_hat = b * B + int(np.argmax(atom_scores[b * B:(b + 1) * B]))
            gram_col = CD.T @ CD[:, i_hat].conj()
            corr2 = (np.abs(gram_col) * inv_col_norms) ** 2 * inv_col_norms[i_hat] ** 2
            hit_blocks = np.any(corr2.reshape(n_blocks, B) >= corr_thresh, axis=1)
            extended |= hit_blocks
            ineligible |= hit_blocks
        else:
            extended[b] = True
            ineligible[b] = True

        for j in range(b * B, (b + 1) * B):
            _orthonormal_append(q_cols, CD[:, j].conj())
        if q_cols:
            qmat = np.column_stack(q_cols)
            r = z - qmat @ (qmat.conj().T @ z)

    if exhausted:
        extended[:] = True
    return (
        np.asarray(selected, dtype=np.int64),
        np.flatnonzero(extended).astype(np.int64),
        exhausted,
    )

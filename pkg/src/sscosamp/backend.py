"""Kernel backend selection.

The compiled extension is preferred when importable; set the environment
variable ``SSCOSAMP_PURE_PYTHON=1`` to force the numpy fallback.  Both
backends implement the same ``greedy_block_select`` contract.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

if os.environ.get("SSCOSAMP_PURE_PYTHON", "") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py


def kernel_backend() -> str:
    """Name of the active kernel implementation ('compiled' or 'python')."""
    return _impl.BACKEND_NAME


def select_blocks(
    D,
    z: np.ndarray,
    k: int,
    B: int,
    eps: float = -1.0,
    impl=None,
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Greedy block selection on a Dictionary; see the kernel docstring.

    Promotes the adjoint rows and z to a common contiguous dtype so both
    backends accept them.  ``impl`` overrides the active backend (used by
    the benchmark and the backend-equivalence tests).
    """
    cd = D.conj_array
    dtype = np.result_type(cd.dtype, z.dtype, np.float64)
    cd_c = np.ascontiguousarray(cd, dtype=dtype)
    z_c = np.ascontiguousarray(z, dtype=dtype)
    inv = np.ascontiguousarray(1.0 / np.asarray(D.col_norms, dtype=np.float64))
    fn = (impl or _impl).greedy_block_select
    return fn(cd_c, inv, z_c, int(k), int(B), float(eps))

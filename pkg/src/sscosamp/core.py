"""Dense linear-algebra primitives: dictionaries, sensing matrices, supports,
orthogonal projections onto atom spans, and support-constrained least squares.

All routines are generic over the scalar field: arrays are float64 or
complex128 and the adjoint is always the conjugate transpose.  Signals and
measurement vectors are plain 1-D numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .exceptions import InvalidSupportError

# Relative singular-value cutoff used everywhere rank decisions are made.
# Directions below cutoff * s_max are dropped, which yields minimum-norm
# least-squares solutions and projections onto the numerical column span.
RANK_CUTOFF = 1e-10

Signal = np.ndarray


def _as_matrix(a, name: str) -> np.ndarray:
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128, copy=False)
    else:
        arr = arr.astype(np.float64, copy=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dictionary:
    """A d x n synthesis dictionary, optionally partitioned into blocks of
    ``block_size`` consecutive atoms.

    ``block_size = 1`` is the unstructured case.  Column norms must be
    nonzero; unit norms are not required.
    """

    array: np.ndarray
    block_size: int = 1
    col_norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        arr = _as_matrix(self.array, "dictionary")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("dictionary must be at least 1x1")
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")
        if arr.shape[1] % self.block_size != 0:
            raise ValueError(
                f"number of atoms {arr.shape[1]} not divisible by block size {self.block_size}"
            )
        norms = np.linalg.norm(arr, axis=0)
        if np.any(norms == 0.0):
            raise ValueError("dictionary has a zero column")
        arr.flags.writeable = False
        norms.flags.writeable = False
        object.__setattr__(self, "array", arr)
        object.__setattr__(self, "col_norms", norms)

    @property
    def d(self) -> int:
        return self.array.shape[0]

    @property
    def n(self) -> int:
        return self.array.shape[1]

    @property
    def n_blocks(self) -> int:
        return self.n // self.block_size

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.array)

    @property
    def conj_array(self) -> np.ndarray:
        """Entrywise conjugate, C-contiguous d x n; lazily cached.  Kernels
        compute correlation vectors as conj(D)^T r, which this layout serves
        through the fast no-transpose BLAS path."""
        cached = getattr(self, "_conj_array", None)
        if cached is None:
            cached = np.ascontiguousarray(self.array.conj())
            cached.flags.writeable = False
            object.__setattr__(self, "_conj_array", cached)
        return cached

    def with_block_size(self, block_size: int) -> "Dictionary":
        """Same atoms, different block partition."""
        return Dictionary(self.array, block_size)


@dataclass(frozen=True, eq=False)
class SensingMatrix:
    """An m x d linear measurement operator."""

    array: np.ndarray

    def __post_init__(self):
        arr = _as_matrix(self.array, "sensing matrix")
        if arr.shape[0] < 1:
            raise ValueError("sensing matrix must have at least one row")
        arr.flags.writeable = False
        object.__setattr__(self, "array", arr)

    @property
    def m(self) -> int:
        return self.array.shape[0]

    @property
    def d(self) -> int:
        return self.array.shape[1]

    def adjoint_apply(self, v: np.ndarray) -> np.ndarray:
        return self.array.conj().T @ v


@dataclass(frozen=True)
class Support:
    """A sorted, duplicate-free set of atom indices.

    ``block_size`` records the partition the support was selected under;
    ``is_block_aligned`` is with respect to that partition.
    """

    atoms: tuple[int, ...]
    block_size: int = 1

    def __post_init__(self):
        atoms = tuple(int(a) for a in self.atoms)
        if any(a < 0 for a in atoms):
            raise InvalidSupportError("negative atom index")
        if any(b <= a for a, b in zip(atoms, atoms[1:])):
            raise InvalidSupportError("atoms must be strictly increasing")
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def from_blocks(cls, blocks: Iterable[int], block_size: int) -> "Support":
        atoms = []
        for b in sorted(set(int(b) for b in blocks)):
            atoms.extend(range(b * block_size, (b + 1) * block_size))
        return cls(tuple(atoms), block_size)

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def is_block_aligned(self) -> bool:
        if self.block_size == 1:
            return True
        return set(self.atoms) == set(
            a for b in self.block_indices() for a in range(b * self.block_size, (b + 1) * self.block_size)
        )

    def block_indices(self) -> tuple[int, ...]:
        """Distinct block indices touched by this support."""
        return tuple(sorted(set(a // self.block_size for a in self.atoms)))

    def n_blocks(self) -> int:
        return len(self.block_indices())

    def union(self, other: "Support") -> "Support":
        return Support(tuple(sorted(set(self.atoms) | set(other.atoms))), self.block_size)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.atoms, dtype=np.int64)


@dataclass(frozen=True)
class SparseCoefficients:
    """A length-n coefficient vector vanishing outside its support."""

    values: np.ndarray
    support: Support

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 1:
            raise ValueError("coefficient vector must be 1-D")
        off = np.ones(len(vals), dtype=bool)
        off[list(self.support.atoms)] = False
        if np.any(vals[off] != 0):
            raise ValueError("coefficients do not vanish outside the support")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)


def block_atoms(block_index: int, block_size: int, n: int) -> range:
    """Atom indices [i*B, (i+1)*B) of one block in a length-n atom set."""
    if block_size < 1 or n % block_size != 0:
        raise ValueError("n must be a positive multiple of block_size")
    if not 0 <= block_index < n // block_size:
        raise InvalidSupportError(
            f"block index {block_index} out of range for {n // block_size} blocks"
        )
    return range(block_index * block_size, (block_index + 1) * block_size)


def restrict_columns(D: Dictionary, T: Support) -> np.ndarray:
    """The d x |T| submatrix of D with the columns indexed by T (sorted order)."""
    if len(T) == 0:
        return np.zeros((D.d, 0), dtype=D.array.dtype)
    idx = T.as_array()
    if idx[-1] >= D.n:
        raise InvalidSupportError(f"atom {idx[-1]} out of range for {D.n} atoms")
    return D.array[:, idx]


def span_basis(D: Dictionary, T: Support) -> np.ndarray:
    """Orthonormal basis (d x r) of range(D_T), rank-truncated by SVD."""
    sub = restrict_columns(D, T)
    if sub.shape[1] == 0:
        return sub
    u, s, _ = np.linalg.svd(sub, full_matrices=False)
    rank = int(np.sum(s > RANK_CUTOFF * s[0])) if s[0] > 0 else 0
    return u[:, :rank]


def project_onto_range(D: Dictionary, T: Support, z: np.ndarray) -> np.ndarray:
    """Orthogonal projection of z onto range(D_T).

    Idempotent and self-adjoint; a rank-deficient D_T projects onto the span
    of its independent columns.
    """
    z = np.asarray(z)
    if z.shape != (D.d,):
        raise ValueError(f"signal has shape {z.shape}, expected ({D.d},)")
    q = span_basis(D, T)
    if q.shape[1] == 0:
        return np.zeros(D.d, dtype=np.result_type(D.array.dtype, z.dtype))
    return q @ (q.conj().T @ z)


def complement_projection(D: Dictionary, T: Support, z: np.ndarray) -> np.ndarray:
    """z minus its projection onto range(D_T)."""
    return z - project_onto_range(D, T, z)


def constrained_least_squares(
    M: SensingMatrix, D: Dictionary, T: Support, y: np.ndarray
) -> tuple[np.ndarray, SparseCoefficients]:
    """Minimize ||y - M D a||_2 over coefficient vectors supported on T.

    Among minimizers the minimum-norm one is returned (singular values below
    RANK_CUTOFF relative to the largest are dropped).  Returns the signal
    x_p = D a and the coefficients.
    """
    y = np.asarray(y)
    if y.shape != (M.m,):
        raise ValueError(f"measurement vector has shape {y.shape}, expected ({M.m},)")
    if M.d != D.d:
        raise ValueError("sensing matrix and dictionary signal dimensions differ")
    sub = restrict_columns(D, T)
    out_dtype = np.result_type(M.array.dtype, D.array.dtype, y.dtype)
    coeffs = np.zeros(D.n, dtype=out_dtype)
    if sub.shape[1] > 0:
        a = M.array @ sub
        sol, *_ = np.linalg.lstsq(a, y.astype(out_dtype, copy=False), rcond=RANK_CUTOFF)
        coeffs[T.as_array()] = sol
    x_p = D.array @ coeffs
    return x_p, SparseCoefficients(coeffs, T)

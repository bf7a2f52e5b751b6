import numpy as np
import pytest

from sscosamp import Dictionary, SensingMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_orthonormal(n: int, seed: int = 0) -> np.ndarray:
    """Random n x n orthonormal matrix (QR of a Gaussian draw)."""
    gen = np.random.default_rng(seed)
    q, r = np.linalg.qr(gen.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def identity_dictionary(n: int, block_size: int = 1) -> Dictionary:
    return Dictionary(np.eye(n), block_size)


def identity_sensing(n: int) -> SensingMatrix:
    return SensingMatrix(np.eye(n))

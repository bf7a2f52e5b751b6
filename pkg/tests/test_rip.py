import numpy as np
import pytest

from sscosamp import (
    Dictionary,
    SensingMatrix,
    exact_drip,
    overcomplete_dft,
    sampled_drip_lower_bound,
    verify_rip_lemmas,
)
from sscosamp.exceptions import InfeasibleBruteForceError

from conftest import identity_dictionary, random_orthonormal


class TestExactDrip:
    def test_orthonormal_measurement_is_isometry(self, rng):
        M = SensingMatrix(random_orthonormal(8, seed=41))
        D = Dictionary(rng.standard_normal((8, 12)))
        est = exact_drip(M, D, 2)
        assert est.delta < 1e-12
        assert est.mode == "exact"
        assert est.supports_examined == 66  # C(12, 2)

    def test_scaled_identity_scalar_case(self):
        for c in (0.5, 1.3):
            M = SensingMatrix(c * np.eye(4))
            est = exact_drip(M, identity_dictionary(4), 1)
            assert abs(est.delta - abs(c**2 - 1)) < 1e-12

    def test_sampled_bounded_by_exact(self, rng):
        M = SensingMatrix(rng.normal(0, 1 / np.sqrt(6), (6, 8)))
        D = Dictionary(rng.standard_normal((8, 8)))
        exact = exact_drip(M, D, 2)
        sampled = sampled_drip_lower_bound(M, D, 2, trials=2000, seed=3)
        assert sampled.delta <= exact.delta + 1e-12
        # With thousands of draws over 28 supports the sampler gets close.
        assert sampled.delta >= 0.5 * exact.delta

    def test_sampled_zero_trials(self, rng):
        M = SensingMatrix(rng.standard_normal((4, 6)))
        D = Dictionary(rng.standard_normal((6, 6)))
        est = sampled_drip_lower_bound(M, D, 2, trials=0)
        assert est.delta == 0.0
        assert est.supports_examined == 0

    def test_sampled_isometric_zero(self, rng):
        M = SensingMatrix(random_orthonormal(7, seed=43))
        D = Dictionary(rng.standard_normal((7, 9)))
        est = sampled_drip_lower_bound(M, D, 2, trials=200, seed=0)
        assert est.delta < 1e-12

    def test_monotone_in_k(self, rng):
        M = SensingMatrix(rng.normal(0, 1 / np.sqrt(5), (5, 7)))
        D = Dictionary(rng.standard_normal((7, 8)))
        deltas = [exact_drip(M, D, k).delta for k in (1, 2, 3)]
        assert deltas[0] <= deltas[1] + 1e-12 <= deltas[2] + 2e-12

    def test_block_class_is_relaxed(self, rng):
        # Block constant at k blocks <= unstructured constant at k*B atoms.
        M = SensingMatrix(rng.normal(0, 1 / np.sqrt(6), (6, 8)))
        D = Dictionary(rng.standard_normal((8, 8)), block_size=2)
        block = exact_drip(M, D, 2, B=2).delta
        flat = exact_drip(M, D.with_block_size(1), 4, B=1).delta
        assert block <= flat + 1e-12

    def test_rank_deficient_support_handled(self, rng):
        cols = rng.standard_normal((6, 3))
        D = Dictionary(np.column_stack([cols, cols[:, 0]]))
        M = SensingMatrix(rng.normal(0, 1 / np.sqrt(5), (5, 6)))
        est = exact_drip(M, D, 2)
        assert np.isfinite(est.delta)

    def test_enumeration_cap(self, rng):
        M = SensingMatrix(rng.standard_normal((4, 40)))
        D = Dictionary(rng.standard_normal((40, 40)))
        with pytest.raises(InfeasibleBruteForceError):
            exact_drip(M, D, 10, enumeration_cap=1000)

    def test_complex_dft_instance(self):
        D = overcomplete_dft(8, 2)
        M = SensingMatrix(np.random.default_rng(5).normal(0, 1 / np.sqrt(6), (6, 8)))
        est = exact_drip(M, D, 1)
        sampled = sampled_drip_lower_bound(M, D, 1, trials=500, seed=2)
        assert sampled.delta <= est.delta + 1e-12


class TestVerifyRipLemmas:
    def test_isometric_measurement(self, rng):
        M = SensingMatrix(random_orthonormal(8, seed=47))
        D = Dictionary(rng.standard_normal((8, 10)))
        report = verify_rip_lemmas(M, D, 2)
        assert report.passed
        assert report.delta < 1e-12
        assert report.margin_gram_deviation >= -1e-10

    def test_random_instance_margins_nonnegative(self, rng):
        M = SensingMatrix(rng.normal(0, 1 / np.sqrt(6), (6, 8)))
        D = Dictionary(rng.standard_normal((8, 8)))
        report = verify_rip_lemmas(M, D, 2, seed=1)
        assert report.passed
        for margin in (
            report.margin_measure_norm,
            report.margin_gram_deviation,
            report.margin_cross_support,
            report.margin_split_inequality,
        ):
            assert margin >= -1e-10

    def test_split_inequality_with_zero_second_vector(self, rng):
        # ||x1 + 0||^2 <= (1+c) ||x1||^2: margin is exactly c ||x1||^2.
        x1 = rng.standard_normal(6)
        for c in (0.5, 1.0, 2.0):
            lhs = np.linalg.norm(x1) ** 2
            bound = (1 + c) * np.linalg.norm(x1) ** 2
            assert abs((bound - lhs) - c * np.linalg.norm(x1) ** 2) < 1e-12

    def test_block_instance(self, rng):
        M = SensingMatrix(rng.normal(0, 1 / np.sqrt(7), (7, 8)))
        D = Dictionary(rng.standard_normal((8, 8)), block_size=2)
        report = verify_rip_lemmas(M, D, 2, B=2, seed=2)
        assert report.passed
        assert report.supports_checked == 4 + 6  # C(4,1) + C(4,2)

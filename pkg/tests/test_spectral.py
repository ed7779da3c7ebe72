import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import dense, random_symmetric
from oracles import jacobi_eigh, max_normalized
from lisamatch.core import BreakdownError, DegenerateInputError, DomainError
from lisamatch.spectral import (PowerConfig, eigengap, leading_eigenpair, perturbation_bound,
                                power_method, second_eigenpair, unit_aligned)


class TestPowerMethod:
    def test_two_cycle_is_fixed_point(self):
        s = power_method(dense([[0, 1], [1, 0]]))
        np.testing.assert_array_equal(s.values, [1.0, 1.0])
        assert s.dominant_value == 1.0
        assert s.iterations == 1
        assert s.converged

    def test_diagonal(self):
        cfg = PowerConfig()
        s = power_method(dense(np.diag([2.0, 1.0])), cfg)
        assert s.values[0] == 1.0
        assert s.values[1] <= cfg.tolerance
        assert s.dominant_value == pytest.approx(2.0)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_jacobi_oracle(self, seed):
        x = random_symmetric(np.random.default_rng(seed), 8)
        w, v = jacobi_eigh(x)
        assert w[-1] - w[-2] > 1e-3
        s = power_method(dense(x))
        assert np.max(np.abs(s.values - max_normalized(v[:, -1]))) <= 1e-3

    def test_zero_matrix(self):
        with pytest.raises(DegenerateInputError):
            power_method(dense(np.zeros((3, 3))))

    def test_breakdown(self):
        # all-ones start is annihilated by this matrix
        cfg = PowerConfig(initial_vector=[1.0, 0.0, 0.0])
        with pytest.raises(BreakdownError):
            power_method(dense([[0, 0, 0], [0, 0, 1], [0, 1, 0]]), cfg)

    def test_non_convergence_is_reported(self):
        s = power_method(dense(np.diag([1.0, 0.999])), PowerConfig(tolerance=1e-12, max_iterations=5))
        assert not s.converged
        assert s.iterations == 5

    def test_config_validation(self):
        with pytest.raises(DomainError):
            PowerConfig(tolerance=0)
        with pytest.raises(DomainError):
            PowerConfig(max_iterations=0)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 30), st.integers(0, 2**32 - 1))
    def test_every_iterate_has_max_one(self, n, seed):
        x = random_symmetric(np.random.default_rng(seed), n)
        maxima = []
        power_method(dense(x), callback=lambda k, v: maxima.append(v.max()))
        assert maxima and all(m == 1.0 for m in maxima)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 30), st.integers(0, 2**32 - 1))
    def test_residual_at_convergence(self, n, seed):
        x = random_symmetric(np.random.default_rng(seed), n)
        w = np.linalg.eigvalsh(x)
        assume((w[-1] - w[-2]) / w[-1] >= 0.1)
        cfg = PowerConfig()
        s = power_method(dense(x), cfg)
        assert s.converged
        res = np.max(np.abs(x @ s.values - s.dominant_value * s.values))
        assert res <= 10 * cfg.tolerance * s.dominant_value

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 40), st.integers(0, 2**32 - 1))
    def test_permutation_equivariance(self, n, seed):
        r = np.random.default_rng(seed)
        a = dense(random_symmetric(r, n))
        perm = r.permutation(n)
        base = power_method(a).values
        moved = power_method(a.relabeled(perm)).values
        np.testing.assert_allclose(moved[perm], base, rtol=0, atol=1e-12)


class TestSecondEigenpair:
    def test_diagonal(self):
        a = dense(np.diag([3.0, 1.0]))
        est = second_eigenpair(a, leading_eigenpair(a))
        assert est.value == pytest.approx(1.0, abs=1e-6)
        # the leading vector is only accurate to the stopping tolerance
        assert abs(est.vector.values[0]) <= PowerConfig().tolerance

    def test_two_cycle(self):
        a = dense([[0, 1], [1, 0]])
        est = second_eigenpair(a, leading_eigenpair(a))
        assert est.value == pytest.approx(-1.0, abs=1e-9)
        u = est.vector.values / np.linalg.norm(est.vector.values)
        assert abs(abs(u @ np.array([1, -1]) / math.sqrt(2)) - 1) < 1e-9

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_jacobi_oracle(self, seed):
        x = random_symmetric(np.random.default_rng(100 + seed), 8)
        w, _ = jacobi_eigh(x)
        a = dense(x)
        est = second_eigenpair(a, leading_eigenpair(a), PowerConfig(tolerance=1e-10, max_iterations=100000))
        rest = w[:-1]
        oracle = rest[np.argmax(np.abs(rest))]
        assert est.value == pytest.approx(oracle, rel=1e-3)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(3, 20), st.integers(0, 2**32 - 1))
    def test_deflated_vector_is_orthogonal(self, n, seed):
        a = dense(random_symmetric(np.random.default_rng(seed), n))
        first = leading_eigenpair(a)
        est = second_eigenpair(a, first)
        u = first.vector.values / np.linalg.norm(first.vector.values)
        v = est.vector.values / np.linalg.norm(est.vector.values)
        assert abs(u @ v) <= 1e-6

    def test_order_one(self):
        a = dense([[2.0]])
        with pytest.raises(DegenerateInputError):
            second_eigenpair(a, leading_eigenpair(a))


class TestEigengap:
    def test_diagonal(self):
        assert eigengap(dense(np.diag([3.0, 1.0]))) == pytest.approx(2.0, abs=1e-6)

    def test_repeated_eigenvalue(self):
        assert eigengap(dense(np.eye(2))) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_jacobi_oracle(self, seed):
        x = random_symmetric(np.random.default_rng(200 + seed), 8)
        w, _ = jacobi_eigh(x)
        got = eigengap(dense(x), PowerConfig(tolerance=1e-10, max_iterations=100000))
        assert got == pytest.approx(w[-1] - w[-2], abs=2e-3)


class TestPerturbationBound:
    def test_unperturbed(self):
        assert perturbation_bound(0.0, 1.0) == 0.0

    def test_formula(self):
        assert perturbation_bound(0.1, 1.0) == pytest.approx(0.4 / (1 - 0.1 * math.sqrt(2)))
        assert perturbation_bound(0.1, 1.0) == pytest.approx(0.46589, abs=1e-5)

    def test_inapplicable(self):
        assert perturbation_bound(0.5, 1.0) is None

    def test_negative_inputs(self):
        with pytest.raises(DomainError):
            perturbation_bound(-0.1, 1.0)
        with pytest.raises(DomainError):
            perturbation_bound(0.1, -1.0)

    def test_unit_aligned(self):
        r, w = unit_aligned(np.array([1.0, 2.0]), np.array([-2.0, -4.0]))
        np.testing.assert_allclose(r, w)

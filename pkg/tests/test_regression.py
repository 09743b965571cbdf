import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import linprog

from scseg import (
    ParameterError,
    dct_basis,
    inlier_mask,
    lad_fit,
    least_squares_fit,
    residuals,
)


def l1_objective(f, cols, alpha):
    return np.abs(f - cols @ alpha).sum()


def lp_lad_oracle(f, cols):
    """Exact l1-regression optimum via linear programming."""
    m, k = cols.shape
    c = np.concatenate([np.zeros(k), np.ones(m)])
    A = np.block([[cols, -np.eye(m)], [-cols, -np.eye(m)]])
    b = np.concatenate([f, -f])
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * (k + m))
    assert res.status == 0
    return res.fun


class TestLeastSquaresFit:
    def test_exact_model(self):
        rng = np.random.default_rng(0)
        P = dct_basis(8, 6)
        a0 = rng.uniform(-200, 200, 6)
        alpha = least_squares_fit(P.columns @ a0, P).alpha
        assert np.abs(alpha - a0).max() < 1e-8

    def test_constant_block(self):
        P = dct_basis(8, 4)
        alpha = least_squares_fit(np.full(64, 100.0), P).alpha
        assert abs(alpha[0] - 800.0) < 1e-10
        assert np.abs(alpha[1:]).max() < 1e-10

    def test_residual_orthogonal_to_columns(self):
        rng = np.random.default_rng(1)
        P = dct_basis(8, 10)
        f = rng.uniform(0, 255, 64)
        r = residuals(f, P, least_squares_fit(f, P))
        assert np.abs(P.columns.T @ r).max() < 1e-8

    def test_idempotent_on_reconstruction(self):
        rng = np.random.default_rng(2)
        P = dct_basis(8, 10)
        f = rng.uniform(0, 255, 64)
        a1 = least_squares_fit(f, P).alpha
        a2 = least_squares_fit(P.columns @ a1, P).alpha
        assert np.abs(a1 - a2).max() < 1e-9

    def test_closed_form_consistency(self):
        rng = np.random.default_rng(3)
        P = dct_basis(16, 10)
        f = rng.uniform(0, 255, 256)
        assert np.abs(least_squares_fit(f, P).alpha
                      - P.columns.T @ f).max() < 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ParameterError):
            least_squares_fit(np.zeros(16), dct_basis(8, 4))


class TestLadFit:
    def test_exact_model(self):
        rng = np.random.default_rng(4)
        P = dct_basis(8, 5)
        a0 = rng.uniform(-200, 200, 5)
        res = lad_fit(P.columns @ a0, P)
        assert res.converged
        assert np.abs(res.alpha - a0).max() < 1e-6

    def test_more_robust_than_lsf_on_outliers(self):
        rng = np.random.default_rng(5)
        P = dct_basis(8, 4)
        f = np.full(64, 100.0)
        f[rng.choice(64, 12, replace=False)] = 255.0
        a_lad = lad_fit(f, P).alpha
        a_lsf = least_squares_fit(f, P).alpha
        assert abs(a_lad[0] - 800.0) < abs(a_lsf[0] - 800.0)

    def test_against_lp_oracle(self):
        rng = np.random.default_rng(6)
        P = dct_basis(4, 3)
        for _ in range(20):
            f = np.full(16, 100.0)
            f[rng.choice(16, 3, replace=False)] = rng.uniform(0, 255, 3)
            res = lad_fit(f, P, max_iter=200, tol=1e-10)
            gap = l1_objective(f, P.columns, res.alpha) - lp_lad_oracle(f, P.columns)
            assert gap < 1e-4

    def test_never_worse_than_lsf_in_l1(self):
        rng = np.random.default_rng(7)
        P = dct_basis(8, 6)
        for _ in range(20):
            f = rng.uniform(0, 255, 64)
            obj_lad = l1_objective(f, P.columns, lad_fit(f, P).alpha)
            obj_lsf = l1_objective(f, P.columns, least_squares_fit(f, P).alpha)
            assert obj_lad <= obj_lsf + 1e-6


class TestResiduals:
    def test_zero_coefficients(self):
        rng = np.random.default_rng(8)
        P = dct_basis(8, 4)
        f = rng.uniform(0, 255, 64)
        assert np.array_equal(residuals(f, P, np.zeros(4)), f)

    def test_exact_model_zero_residual(self):
        rng = np.random.default_rng(9)
        P = dct_basis(8, 4)
        a0 = rng.uniform(-100, 100, 4)
        assert np.abs(residuals(P.columns @ a0, P, a0)).max() < 1e-10

    def test_matches_triple_loop_oracle(self):
        rng = np.random.default_rng(10)
        P = dct_basis(4, 5)
        f = rng.uniform(0, 255, 16)
        a = rng.uniform(-50, 50, 5)
        expect = np.empty(16)
        for i in range(16):
            acc = f[i]
            for j in range(5):
                acc -= P.columns[i, j] * a[j]
            expect[i] = acc
        assert np.abs(residuals(f, P, a) - expect).max() < 1e-12


class TestInlierMask:
    def test_zero_residuals_all_background(self):
        mask = inlier_mask(np.zeros(64), 10.0)
        assert mask.foreground_count == 0

    def test_boundary_semantics(self):
        r = np.array([5.0, -5.0, 10.0, -10.0, 11.0, 0, 0, 0, 0])
        mask = inlier_mask(r, 10.0)
        assert mask.bits[:5].tolist() == [False, False, True, True, True]

    def test_matches_elementwise_oracle(self):
        rng = np.random.default_rng(11)
        r = rng.normal(0, 20, 64)
        mask = inlier_mask(r, 10.0)
        assert np.array_equal(mask.bits, np.array([abs(v) >= 10 for v in r]))

    @given(arrays(float, 16, elements=st.floats(-100, 100)),
           st.floats(min_value=0.1, max_value=50),
           st.floats(min_value=0.0, max_value=50))
    def test_monotone_in_threshold(self, r, eps, bump):
        low = inlier_mask(r, eps)
        high = inlier_mask(r, eps + bump)
        # raising the threshold never converts background to foreground
        assert not np.any(high.bits & ~low.bits)

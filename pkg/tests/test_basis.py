import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.fft import dctn

from scseg import (
    BasisKind,
    ParameterError,
    basis_rmse_study,
    dct_basis,
    least_squares_fit,
    ortho_poly_basis,
    zigzag_order,
)

from helpers import smooth_dct_blocks


class TestZigzagOrder:
    def test_n1(self):
        assert zigzag_order(1) == [(0, 0)]

    def test_n2(self):
        assert zigzag_order(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_n3_prefix(self):
        assert zigzag_order(3)[:6] == [
            (0, 0), (0, 1), (1, 0), (2, 0), (1, 1), (0, 2)
        ]

    @given(st.integers(min_value=1, max_value=16))
    def test_is_permutation(self, n):
        pairs = zigzag_order(n)
        assert sorted(pairs) == [(u, v) for u in range(n) for v in range(n)]

    def test_invalid_n(self):
        with pytest.raises(ParameterError):
            zigzag_order(0)


class TestDctBasis:
    def test_constant_column(self):
        P = dct_basis(8, 1)
        assert np.allclose(P.columns[:, 0], 1.0 / 8.0, atol=1e-12)

    def test_orthonormal(self):
        P = dct_basis(64, 10)
        gram = P.columns.T @ P.columns
        assert np.abs(gram - np.eye(10)).max() < 1e-10

    def test_full_basis_exact_reconstruction(self):
        rng = np.random.default_rng(0)
        P = dct_basis(4, 16)
        blk = rng.uniform(0, 255, (4, 4))
        f = blk.flatten(order="F")
        alpha = least_squares_fit(f, P).alpha
        assert np.abs(P.columns @ alpha - f).max() < 1e-9

    def test_coefficients_match_dct2_oracle(self):
        rng = np.random.default_rng(1)
        P = dct_basis(4, 16)
        for _ in range(10):
            blk = rng.uniform(0, 255, (4, 4))
            alpha = least_squares_fit(blk.flatten(order="F"), P).alpha
            oracle = dctn(blk, norm="ortho")
            expect = np.array([oracle[u, v] for (u, v) in P.order])
            assert np.abs(alpha - expect).max() < 1e-9

    def test_closed_form_spot_check(self):
        rng = np.random.default_rng(2)
        n = 16
        P = dct_basis(n, 20)
        for _ in range(50):
            j = rng.integers(0, 20)
            u, v = P.order[j]
            x, y = rng.integers(0, n, 2)
            bu = np.sqrt((2.0 if u else 1.0) / n)
            bv = np.sqrt((2.0 if v else 1.0) / n)
            expect = (bu * bv
                      * np.cos((2 * x + 1) * np.pi * u / (2 * n))
                      * np.cos((2 * y + 1) * np.pi * v / (2 * n)))
            assert abs(P.columns[x + y * n, j] - expect) < 1e-12

    def test_invalid_k(self):
        with pytest.raises(ParameterError):
            dct_basis(4, 17)
        with pytest.raises(ParameterError):
            dct_basis(4, 0)


class TestOrthoPolyBasis:
    def test_constant_column(self):
        P = ortho_poly_basis(8, 1)
        assert np.allclose(P.columns[:, 0], 1.0 / 8.0, atol=1e-12)

    def test_orthonormal(self):
        P = ortho_poly_basis(16, 6)
        gram = P.columns.T @ P.columns
        assert np.abs(gram - np.eye(6)).max() < 1e-9

    def test_degree01_orthogonal_to_constant(self):
        P = ortho_poly_basis(8, 3)
        j = P.order.index((0, 1))
        assert abs(P.columns[:, 0] @ P.columns[:, j]) < 1e-12

    @pytest.mark.parametrize("n", [8, 16, 32, 64])
    def test_orthonormal_large(self, n):
        P = ortho_poly_basis(n, 10)
        gram = P.columns.T @ P.columns
        assert np.abs(gram - np.eye(10)).max() < 1e-9


class TestBasisRmseStudy:
    def test_exactly_representable(self):
        rng = np.random.default_rng(3)
        P = dct_basis(8, 3)
        blocks = [P.columns @ rng.uniform(100, 400, 3) for _ in range(5)]
        table = basis_rmse_study(blocks, 6)
        for k in range(3, 7):
            assert table[(k, BasisKind.DCT)] < 1e-9

    def test_constant_block_zero_at_k1(self):
        blocks = [np.full(64, 100.0)]
        table = basis_rmse_study(blocks, 2)
        assert table[(1, BasisKind.DCT)] < 1e-9
        assert table[(1, BasisKind.ORTHO_POLY)] < 1e-9

    def test_monotone_and_dct_no_worse(self):
        rng = np.random.default_rng(4)
        blocks = smooth_dct_blocks(64, 50, rng)
        table = basis_rmse_study(blocks, 20)
        for kind in (BasisKind.DCT, BasisKind.ORTHO_POLY):
            curve = [table[(k, kind)] for k in range(1, 21)]
            assert all(a >= b - 1e-12 for a, b in zip(curve, curve[1:]))
        for k in range(1, 21):
            assert (table[(k, BasisKind.DCT)]
                    <= table[(k, BasisKind.ORTHO_POLY)] + 0.05)

    def test_empty_blocks(self):
        with pytest.raises(ParameterError):
            basis_rmse_study([], 4)

import numpy as np
import pytest

from modhdr import InvalidInputError, dct, dct2, forward_diff, idct, idct2, solve_diff_least_squares, solve_poisson_2d
from modhdr.finite_diff import adjoint_diff

from oracles import dct_matrix, dense_diff_ls, dense_poisson, diff_matrix


def test_dct_constant_vector():
    assert np.allclose(dct([1, 1, 1, 1]), [2, 0, 0, 0], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 31])
def test_dct_matches_matrix_definition(n):
    v = np.random.default_rng(n).normal(size=n)
    assert np.allclose(dct(v), dct_matrix(n) @ v, atol=1e-13)
    assert np.allclose(idct(v), dct_matrix(n).T @ v, atol=1e-13)


def test_dct_round_trip_and_parseval():
    v = np.random.default_rng(0).normal(size=257)
    assert np.max(np.abs(idct(dct(v)) - v)) <= 1e-12 * np.max(np.abs(v))
    assert np.linalg.norm(dct(v)) == pytest.approx(np.linalg.norm(v), rel=1e-13)


def test_dct2_constant_separable_round_trip():
    c = 0.7
    spec = dct2(np.full((5, 8), c))
    assert spec[0, 0] == pytest.approx(c * np.sqrt(40))
    spec[0, 0] = 0.0
    assert np.allclose(spec, 0.0, atol=1e-14)
    p = np.random.default_rng(1).normal(size=(6, 9))
    rows_then_cols = dct_matrix(6) @ p @ dct_matrix(9).T
    assert np.allclose(dct2(p), rows_then_cols, atol=1e-13)
    assert np.allclose(idct2(dct2(p)), p, atol=1e-13)
    assert np.linalg.norm(dct2(p)) == pytest.approx(np.linalg.norm(p), rel=1e-13)


def test_empty_inputs_rejected():
    for f in (dct, idct):
        with pytest.raises(InvalidInputError):
            f([])
    for f in (dct2, idct2):
        with pytest.raises(InvalidInputError):
            f(np.zeros((0, 3)))
    with pytest.raises(InvalidInputError):
        solve_diff_least_squares([])


def test_diff_ls_examples():
    assert np.allclose(solve_diff_least_squares([1.0, 2.0]), [-4 / 3, -1 / 3, 5 / 3], atol=1e-14)
    assert np.allclose(solve_diff_least_squares(np.zeros(9)), 0.0)
    v = np.random.default_rng(2).normal(size=40)
    assert np.allclose(solve_diff_least_squares(forward_diff(v)), v - v.mean(), atol=1e-9)


@pytest.mark.parametrize("pad", [True, False])
def test_diff_ls_matches_pseudoinverse(pad):
    rng = np.random.default_rng(3)
    for n in (2, 3, 5, 17, 33, 64):
        for _ in range(5):
            b = rng.normal(size=n - 1)
            s = solve_diff_least_squares(b, pad=pad)
            assert np.max(np.abs(s - dense_diff_ls(b))) <= 1e-8


def test_diff_ls_normal_equations_residual():
    b = np.random.default_rng(4).normal(size=99)
    s = solve_diff_least_squares(b)
    d = diff_matrix(100)
    assert np.max(np.abs(d.T @ (d @ s) - adjoint_diff(b))) <= 1e-9
    assert abs(s.mean()) <= 1e-12


def test_printed_denominator_fails_residual():
    # dividing by (2cos - 1) instead of the Laplacian eigenvalues does not solve the normal equations
    b = np.random.default_rng(5).normal(size=15)
    n = 16
    rho = dct(adjoint_diff(b))
    e = 2 * np.cos(np.pi * np.arange(n) / n) - 1
    s = idct(rho / e)
    d = diff_matrix(n)
    assert np.max(np.abs(d.T @ d @ s - adjoint_diff(b))) > 1e-3


def test_poisson_zero_and_shapes():
    assert np.array_equal(solve_poisson_2d(np.zeros((4, 5)), np.zeros((3, 6))), np.zeros((4, 6)))
    with pytest.raises(InvalidInputError):
        solve_poisson_2d(np.zeros((4, 5)), np.zeros((4, 6)))


def test_poisson_recovers_random_plane():
    p = np.random.default_rng(6).normal(size=(8, 8))
    s = solve_poisson_2d(np.diff(p, axis=1), np.diff(p, axis=0))
    assert np.allclose(s, p - p.mean(), atol=1e-9)


def test_poisson_row_step_matches_dense():
    p = np.zeros((6, 6))
    p[3:] = 1.0
    gx, gy = np.diff(p, axis=1), np.diff(p, axis=0)
    s = solve_poisson_2d(gx, gy)
    assert np.allclose(s, dense_poisson(gx, gy), atol=1e-10)
    assert np.allclose(s, p - p.mean(), atol=1e-10)


def test_poisson_inconsistent_gradients_match_dense():
    rng = np.random.default_rng(7)
    for m, n in [(2, 2), (3, 7), (9, 4), (12, 12)]:
        gx, gy = rng.normal(size=(m, n - 1)), rng.normal(size=(m - 1, n))
        assert np.max(np.abs(solve_poisson_2d(gx, gy) - dense_poisson(gx, gy))) <= 1e-8

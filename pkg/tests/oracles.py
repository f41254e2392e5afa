"""Dense reference implementations used as independent test oracles."""

import numpy as np


def diff_matrix(n: int) -> np.ndarray:
    """``(n-1, n)`` forward-difference matrix."""
    d = np.zeros((n - 1, n))
    idx = np.arange(n - 1)
    d[idx, idx] = -1.0
    d[idx, idx + 1] = 1.0
    return d


def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix built from its definition."""
    k = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    c = np.cos(np.pi * (2 * i + 1) * k / (2 * n)) * np.sqrt(2.0 / n)
    c[0] /= np.sqrt(2.0)
    return c


def gradient_2d_matrix(m: int, n: int) -> np.ndarray:
    """Stacked ``[Dx; Dy]`` acting on a row-major flattened ``m x n`` plane."""
    dx = np.kron(np.eye(m), diff_matrix(n))
    dy = np.kron(diff_matrix(m), np.eye(n))
    return np.vstack([dx, dy])


def dense_diff_ls(b: np.ndarray) -> np.ndarray:
    return np.linalg.pinv(diff_matrix(b.size + 1)) @ b


def dense_poisson(gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    m, n = gx.shape[0], gx.shape[1] + 1
    a = gradient_2d_matrix(m, n)
    s = np.linalg.pinv(a) @ np.concatenate([gx.ravel(), gy.ravel()])
    return s.reshape(m, n)

"""Orthonormal DCT and closed-form least-squares integration of difference data.

The forward-difference operator ``D`` (valid mode, no wrap-around) satisfies
``D^T D = L``, the Neumann Laplacian, whose eigenvectors are the DCT-II basis
with eigenvalues ``2 - 2 cos(pi i / n)``. Integrating ``D s = b`` in the least
squares sense is therefore a diagonal solve in the DCT domain. The ``i = 0``
eigenvalue is zero; that coefficient is dropped, which returns the zero-mean
(minimum-norm) solution.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import fft

from .core_types import InvalidInputError


def dct(v) -> np.ndarray:
    """Orthonormal DCT-II."""
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        raise InvalidInputError("dct of an empty signal")
    return fft.dct(v, type=2, norm="ortho")


def idct(c) -> np.ndarray:
    """Inverse of :func:`dct` (orthonormal DCT-III)."""
    c = np.asarray(c, dtype=np.float64)
    if c.size == 0:
        raise InvalidInputError("idct of an empty spectrum")
    return fft.idct(c, type=2, norm="ortho")


def dct2(plane) -> np.ndarray:
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim != 2 or plane.size == 0:
        raise InvalidInputError(f"dct2 expects a non-empty 2D plane, got shape {plane.shape}")
    return fft.dctn(plane, type=2, norm="ortho")


def idct2(spectrum) -> np.ndarray:
    spectrum = np.asarray(spectrum, dtype=np.float64)
    if spectrum.ndim != 2 or spectrum.size == 0:
        raise InvalidInputError(f"idct2 expects a non-empty 2D spectrum, got shape {spectrum.shape}")
    return fft.idctn(spectrum, type=2, norm="ortho")


@lru_cache(maxsize=32)
def laplacian_eigenvalues(n: int) -> np.ndarray:
    """Eigenvalues ``2 - 2 cos(pi i / n)`` of ``D^T D`` for length-``n`` signals."""
    ev = 2.0 - 2.0 * np.cos(np.pi * np.arange(n) / n)
    ev.setflags(write=False)
    return ev


@lru_cache(maxsize=32)
def _inverse_eigenvalues(n: int) -> np.ndarray:
    # the zero eigenvalue maps to 0, which drops the DC coefficient
    inv = np.zeros(n)
    inv[1:] = 1.0 / laplacian_eigenvalues(n)[1:]
    inv.setflags(write=False)
    return inv


def solve_diff_least_squares(b, pad: bool = True) -> np.ndarray:
    """Zero-mean ``s`` of length ``len(b) + 1`` minimizing ``||D s - b||^2``.

    ``D s = b`` is always consistent, so appending zeros to ``b`` only extends
    the solution by a constant tail. With ``pad`` the solve runs at the next
    FFT-friendly length and the truncated result is re-centred; the output is
    the same minimizer, but transform time no longer depends on the prime
    factors of ``len(b) + 1``.
    """
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 1 or b.size < 1:
        raise InvalidInputError(f"expected a 1D signal of length >= 1, got shape {b.shape}")
    n = b.size + 1
    size = fft.next_fast_len(n, real=True) if pad else n
    # adjoint of D applied to b zero-extended to length size - 1
    r = np.zeros(size)
    r[: n - 1] -= b
    r[1:n] += b
    rho = fft.dct(r, type=2, norm="ortho", overwrite_x=True)
    rho *= _inverse_eigenvalues(size)
    s = fft.idct(rho, type=2, norm="ortho", overwrite_x=True)
    if size != n:
        s = s[:n]
        s -= s.mean()
    return s


def _adjoint_diff_axis(g: np.ndarray, axis: int) -> np.ndarray:
    shape = list(g.shape)
    shape[axis] += 1
    out = np.zeros(shape)
    if g.shape[axis] == 0:
        return out
    head = [slice(None)] * g.ndim
    tail = [slice(None)] * g.ndim
    head[axis] = slice(0, -1)
    tail[axis] = slice(1, None)
    out[tuple(head)] -= g
    out[tuple(tail)] += g
    return out


def solve_poisson_2d(gx, gy) -> np.ndarray:
    """Zero-mean plane ``s`` minimizing ``||Dx s - gx||^2 + ||Dy s - gy||^2``.

    ``gx`` holds differences along columns (shape ``(M, N-1)``) and ``gy``
    along rows (shape ``(M-1, N)``) of the ``M x N`` result.
    """
    gx = np.asarray(gx, dtype=np.float64)
    gy = np.asarray(gy, dtype=np.float64)
    if gx.ndim != 2 or gy.ndim != 2:
        raise InvalidInputError("gradients must be 2D")
    m, n = gx.shape[0], gx.shape[1] + 1
    if gy.shape != (m - 1, n) or m < 1:
        raise InvalidInputError(
            f"gradient shapes {gx.shape} and {gy.shape} are inconsistent; expected (M, N-1) and (M-1, N)"
        )
    rho = dct2(_adjoint_diff_axis(gx, 1) + _adjoint_diff_axis(gy, 0))
    ev = laplacian_eigenvalues(m)[:, None] + laplacian_eigenvalues(n)[None, :]
    ev = ev.copy()
    ev[0, 0] = 1.0
    rho /= ev
    rho[0, 0] = 0.0
    return idct2(rho)

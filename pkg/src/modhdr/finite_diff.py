"""Valid-mode forward differences, their exact adjoint and the summation operator."""

from __future__ import annotations

import numpy as np

from .core_types import InvalidInputError


def _vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise InvalidInputError(f"expected a 1D signal, got shape {v.shape}")
    return v


def forward_diff(v) -> np.ndarray:
    """``out[i] = v[i+1] - v[i]``; output is one sample shorter."""
    v = _vector(v)
    if v.size < 2:
        raise InvalidInputError(f"forward_diff needs at least 2 samples, got {v.size}")
    return v[1:] - v[:-1]


def high_order_diff(v, order: int) -> np.ndarray:
    v = _vector(v)
    if order < 1:
        raise InvalidInputError(f"order must be >= 1, got {order}")
    if v.size <= order:
        raise InvalidInputError(f"order-{order} difference needs more than {order} samples, got {v.size}")
    for _ in range(order):
        v = v[1:] - v[:-1]
    return v


def adjoint_diff(b) -> np.ndarray:
    """Transpose of the ``(m, m+1)`` forward-difference matrix applied to ``b``.

    ``out[0] = -b[0]``, ``out[i] = b[i-1] - b[i]``, ``out[m] = b[m-1]``.
    """
    b = _vector(b)
    if b.size < 1:
        raise InvalidInputError("adjoint_diff needs at least 1 sample")
    out = np.empty(b.size + 1)
    out[0] = -b[0]
    out[1:-1] = b[:-1] - b[1:]
    out[-1] = b[-1]
    return out


def cumsum(v) -> np.ndarray:
    """Running sum, same length as the input (empty in, empty out)."""
    return np.cumsum(_vector(v))


def itoh_margin(v, order: int, lam: float = 1.0) -> tuple[float, bool]:
    """Return ``(max |diff^order v|, max < lam/2)``.

    When the flag is True the wrapped order-``order`` differences of the
    modulo samples equal the true differences, so the signal is recoverable.
    """
    max_abs = float(np.max(np.abs(high_order_diff(v, order))))
    return max_abs, bool(max_abs < lam / 2)

"""Stripe-artifact removal for unwrapped planes.

Wrong wrap counts along the vectorization path leave row- or column-constant
offsets that are multiples of ``lam``. Their gradients are large (about
``lam``) and sparse, while gradients of a correctly unwrapped, recoverable
image stay below ``lam / 2``. The large gradients are isolated by hard
thresholding and integrated back into a stripe map with a 2D DCT Poisson
solve, which is then subtracted.

Because the offsets are multiples of ``lam``, the kept gradients are by default
snapped to the nearest multiple of ``lam`` before integration. Without the
snap, the image's own gradient at every stripe boundary leaks into the stripe
map; ``snap=False`` gives that unsnapped estimator.
"""

from __future__ import annotations

import numpy as np

from .core_types import InvalidInputError
from .sensing import round_half_away
from .spectral import solve_poisson_2d

KEEP_LARGE = "large"
KEEP_SMALL = "small"


def hard_threshold(v, gamma: float, keep: str = KEEP_LARGE) -> np.ndarray:
    """Zero entries by magnitude.

    ``keep="large"`` keeps ``|v| > gamma``; ``keep="small"`` keeps ``|v| <= gamma``.
    """
    if not gamma >= 0:
        raise InvalidInputError(f"gamma must be >= 0, got {gamma}")
    if keep not in (KEEP_LARGE, KEEP_SMALL):
        raise InvalidInputError(f"keep must be 'large' or 'small', got {keep!r}")
    v = np.asarray(v, dtype=np.float64)
    mask = np.abs(v) > gamma
    if keep == KEEP_SMALL:
        mask = ~mask
    return np.where(mask, v, 0.0)


def remove_stripes(
    x_tilde, gamma: float = 0.5, keep: str = KEEP_LARGE, snap: bool = True, lam: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(x_hat, stripes)`` with ``x_hat = x_tilde - stripes``.

    ``stripes`` is the zero-mean field whose gradients best match the
    thresholded (and, with ``snap``, lattice-projected) gradients of ``x_tilde``.
    """
    if not lam > 0:
        raise InvalidInputError(f"lambda must be > 0, got {lam}")
    x_tilde = np.asarray(x_tilde, dtype=np.float64)
    if x_tilde.ndim != 2 or min(x_tilde.shape) < 2:
        raise InvalidInputError(f"remove_stripes needs a plane of at least 2x2, got shape {x_tilde.shape}")
    if not np.all(np.isfinite(x_tilde)):
        raise InvalidInputError("plane contains non-finite samples")
    gx = hard_threshold(np.diff(x_tilde, axis=1), gamma, keep)
    gy = hard_threshold(np.diff(x_tilde, axis=0), gamma, keep)
    if not (gx.any() or gy.any()):
        return x_tilde.copy(), np.zeros_like(x_tilde)
    if snap:
        for g in (gx, gy):
            kept = np.nonzero(g)
            g[kept] = lam * round_half_away(g[kept] / lam)
    stripes = solve_poisson_2d(gx, gy)
    return x_tilde - stripes, stripes


def reproject(x_hat, y, lam: float = 1.0) -> np.ndarray:
    """Snap ``x_hat`` to the nearest value congruent to ``y`` modulo ``lam``."""
    x_hat = np.asarray(x_hat, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return y + lam * round_half_away((x_hat - y) / lam)

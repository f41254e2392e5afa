"""Recovery of wrap counts from 1D modulo samples.

Both unwrappers estimate the integer field ``k`` in ``x = y + lam * k`` from the
order-N differences of the measurement. Under ``|diff^N x| < lam / 2`` the
centered wrap of ``diff^N y`` equals ``diff^N x``, so ``diff^N k`` is known
exactly; ``k`` is then recovered by N successive integrations, each followed by
projection onto the integers.

Every integration leaves one unknown integer constant. For intermediate
stages the constant is picked so that the next integrated level of the
estimate has the smallest range: a wrong constant adds a ramp of slope
``lam`` per sample, which no bounded signal exhibits. The final constant is
fixed by shifting ``k`` so its minimum is 0 (the darkest sample is taken as
unwrapped); a global shift by ``lam`` is unobservable from the measurement.
"""

from __future__ import annotations

import numpy as np

from .core_types import HdrImage, InvalidInputError, ModuloImage, UnwrapResult
from .finite_diff import high_order_diff
from .sensing import centered_wrap
from .spectral import solve_diff_least_squares


def _check_signal(y, order, lam) -> np.ndarray:
    if not lam > 0:
        raise InvalidInputError(f"lambda must be > 0, got {lam}")
    if int(order) != order or order < 1:
        raise InvalidInputError(f"order must be an integer >= 1, got {order}")
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise InvalidInputError(f"expected a 1D signal, got shape {y.shape}")
    if y.size <= order:
        raise InvalidInputError(f"signal of length {y.size} is too short for order {order}")
    if not np.all(np.isfinite(y)):
        raise InvalidInputError("signal contains non-finite samples")
    return y


def residual_epsilon(y, order: int, lam: float = 1.0) -> np.ndarray:
    """``centered_wrap(diff^N y) - diff^N y``; entries are multiples of ``lam``."""
    y = _check_signal(y, order, lam)
    d = high_order_diff(y, order)
    return centered_wrap(d, lam) - d


def _differences(y: np.ndarray, order: int) -> list[np.ndarray]:
    diffs = [y]
    for _ in range(order):
        diffs.append(diffs[-1][1:] - diffs[-1][:-1])
    return diffs


def _range_with_slope(w: np.ndarray, ramp: np.ndarray, c: int) -> float:
    z = c * ramp
    z += w
    return float(z.max() - z.min())


def _integration_constant(u: np.ndarray, below: np.ndarray, lam: float) -> int:
    """Integer ``c`` such that integrating ``u + c`` gives the least-range level.

    ``u`` estimates ``diff^j k`` up to a constant; ``below`` is ``diff^(j-1) y``.
    The candidate level is ``below + lam * cumsum0(u + c)``, whose dependence on
    ``c`` is the ramp ``c * lam * i``.
    """
    w = np.empty(u.size + 1)
    w[0] = 0.0
    np.cumsum(u, out=w[1:])
    w *= lam
    w += below
    ramp = np.arange(w.size, dtype=np.float64)
    ramp *= lam
    # least-squares slope of w, in units of lam per sample
    m = w.size
    i_mean = (m - 1) / 2.0
    i_var = (m * m - 1) / 12.0 * m
    slope = (float(np.dot(ramp, w)) / lam - i_mean * float(w.sum())) / i_var / lam
    c = -int(np.floor(abs(slope) + 0.5) * np.sign(slope))
    f = _range_with_slope(w, ramp, c)
    for step in (1, -1):
        while True:
            g = _range_with_slope(w, ramp, c + step)
            if g < f:
                c, f = c + step, g
            else:
                break
    return c


def _finish(y: np.ndarray, k: np.ndarray, lam: float) -> UnwrapResult:
    k -= k.min()
    x_hat = lam * k
    x_hat += y
    ratio = x_hat - y
    if lam != 1.0:
        ratio /= lam
    ratio -= k
    violation = float(max(ratio.max(), -ratio.min()))
    return UnwrapResult(x_hat=x_hat, k_hat=k.astype(np.int64), residual_integer_violation=violation)


def _snap(v: np.ndarray) -> np.ndarray:
    # entries are within float noise of integers here, so ties cannot occur
    # and rint agrees with round_half_away
    return np.rint(v, out=v)


def _check_wrapped(y: np.ndarray, lam: float):
    if y.min() < 0 or y.max() >= lam:
        raise InvalidInputError(f"modulo samples must lie in [0, {lam}), got range [{y.min()}, {y.max()}]")


def autoregressive_unwrap(y, order: int = 2, lam: float = 1.0) -> UnwrapResult:
    """Recover ``x`` from ``y = mod(x, lam)`` with N closed-form DCT integrations."""
    y = _check_signal(y, order, lam)
    _check_wrapped(y, lam)
    diffs = _differences(y, order)
    s = _snap((centered_wrap(diffs[order], lam) - diffs[order]) / lam)
    for n in range(order):
        j = order - 1 - n  # s now estimates diff^j k
        s = solve_diff_least_squares(s)
        s -= s[0]
        s = _snap(s)
        if j > 0:
            s += _integration_constant(s, diffs[j - 1], lam)
    return _finish(y, s, lam)


def usf_unwrap(y, order: int = 2, lam: float = 1.0) -> UnwrapResult:
    """Baseline: the same recursion with plain running sums in place of DCT solves."""
    y = _check_signal(y, order, lam)
    _check_wrapped(y, lam)
    diffs = _differences(y, order)
    s = _snap((centered_wrap(diffs[order], lam) - diffs[order]) / lam)
    for j in range(order - 1, 0, -1):
        s = _snap(np.concatenate(([0.0], np.cumsum(s))))
        s += _integration_constant(s, diffs[j - 1], lam)
    k = np.concatenate(([0.0], np.cumsum(s)))
    return _finish(y, k, lam)


def rowwise_unwrap(image: ModuloImage, order: int = 2, lam: float | None = None) -> HdrImage:
    """Unwrap every row of every channel independently.

    Each row gets its own integration constant, so rows are generally offset
    from each other by multiples of ``lam``.
    """
    if not isinstance(image, ModuloImage):
        raise InvalidInputError(f"expected ModuloImage, got {type(image).__name__}")
    lam = image.lam if lam is None else lam
    out = np.empty_like(image.data)
    for c, plane in enumerate(image.data):
        for r, row in enumerate(plane):
            out[c, r] = autoregressive_unwrap(row, order, lam).x_hat
    return HdrImage(out)

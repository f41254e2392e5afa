"""Forward models: modulo wrapping, saturating clipping and the alpha-scaled acquisition."""

from __future__ import annotations

import numpy as np

from .core_types import HdrImage, InvalidInputError, ModuloImage, SensorConfig


def _check_lambda(lam):
    if not lam > 0:
        raise InvalidInputError(f"lambda must be > 0, got {lam}")


def modulo_wrap(t, lam=1.0):
    """Floor-mod into ``[0, lam)``. Works on scalars and arrays."""
    _check_lambda(lam)
    t = np.asarray(t, dtype=np.float64)
    out = np.divide(t, lam, out=np.empty_like(t))
    np.floor(out, out=out)
    out *= -lam
    out += t
    # t slightly below a multiple of lam can round up to exactly lam
    out[out >= lam] -= lam
    out[out < 0] = 0.0
    return out[()] if out.ndim == 0 else out


def round_half_away(v):
    """Round to the nearest integer, ties away from zero."""
    v = np.asarray(v, dtype=np.float64)
    out = np.abs(v, out=np.empty_like(v))
    out += 0.5
    np.floor(out, out=out)
    return np.copysign(out, v, out=out)


def centered_wrap(t, lam=1.0):
    """Wrap into ``[-lam/2, lam/2)``; ``lam/2`` itself maps to ``-lam/2``."""
    _check_lambda(lam)
    t = np.asarray(t, dtype=np.float64)
    out = modulo_wrap(t + lam / 2, lam) - lam / 2
    return out[()] if np.ndim(out) == 0 else out


def _check_unit_range(x: HdrImage):
    if not isinstance(x, HdrImage):
        raise InvalidInputError(f"expected HdrImage, got {type(x).__name__}")
    lo, hi = x.data.min(), x.data.max()
    if lo < 0 or hi > 1:
        raise InvalidInputError(f"input must be normalized to [0, 1], got range [{lo}, {hi}]")


def simulate_modulo(x: HdrImage, cfg: SensorConfig) -> ModuloImage:
    """Modulo-camera measurement ``mod(alpha * x, lam)`` of a [0, 1]-normalized image."""
    _check_unit_range(x)
    return ModuloImage(modulo_wrap(cfg.alpha * x.data, cfg.lam), lam=cfg.lam)


def simulate_ccd(x: HdrImage, cfg: SensorConfig) -> HdrImage:
    """Conventional sensor: ``alpha * x`` hard-clipped at the well capacity ``lam``."""
    _check_unit_range(x)
    return HdrImage(np.minimum(cfg.alpha * x.data, cfg.lam))

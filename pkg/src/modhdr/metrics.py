"""Image-quality metrics computed in the HDR range, and Reinhard tone mapping."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core_types import HdrImage, InvalidInputError

SSIM_SIGMA = 1.5
SSIM_WIN = 11
SSIM_K1 = 0.01
SSIM_K2 = 0.03
Q_BLOCK = 8
EXACT_RMS = float(np.finfo(np.float64).eps)


@dataclass
class MetricsReport:
    psnr: float
    ssim: float
    q_index: float
    method: str = ""
    alpha: float = float("nan")
    order: int | None = None


def _as_array(img) -> np.ndarray:
    if isinstance(img, HdrImage):
        return img.data
    return np.asarray(img, dtype=np.float64)


def _pair(ref, est) -> tuple[np.ndarray, np.ndarray]:
    ref, est = _as_array(ref), _as_array(est)
    if ref.shape != est.shape:
        raise InvalidInputError(f"shape mismatch: {ref.shape} vs {est.shape}")
    if ref.size == 0:
        raise InvalidInputError("empty images")
    return ref, est


def _planes(arr: np.ndarray) -> list[np.ndarray]:
    if arr.ndim == 2:
        return [arr]
    if arr.ndim == 3:
        return list(arr)
    raise InvalidInputError(f"expected a plane or (channels, h, w) stack, got shape {arr.shape}")


def align_mean(ref, est) -> np.ndarray:
    """Shift ``est`` so its mean matches ``ref``, separately for each channel plane.

    Every plane is unwrapped on its own and so carries its own unobservable
    offset.
    """
    ref, est = _pair(ref, est)
    axes = (-2, -1) if ref.ndim == 3 else None
    return est - est.mean(axis=axes, keepdims=True) + ref.mean(axis=axes, keepdims=True)


def psnr(ref, est, peak: float = 1.0) -> float:
    """``10 log10(peak^2 / MSE)``.

    Returns ``inf`` when the RMS error is at or below float64 round-off of
    ``peak`` (about 313 dB), where the estimate is exact to representation.
    """
    if not peak > 0:
        raise InvalidInputError(f"peak must be > 0, got {peak}")
    ref, est = _pair(ref, est)
    mse = float(np.mean((ref - est) ** 2))
    if mse <= (EXACT_RMS * peak) ** 2:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def _ssim_plane(x: np.ndarray, y: np.ndarray, data_range: float) -> float:
    c1 = (SSIM_K1 * data_range) ** 2
    c2 = (SSIM_K2 * data_range) ** 2
    if min(x.shape) < SSIM_WIN:
        mx, my = x.mean(), y.mean()
        vx, vy = x.var(), y.var()
        cxy = np.mean((x - mx) * (y - my))
        return float((2 * mx * my + c1) * (2 * cxy + c2) / ((mx**2 + my**2 + c1) * (vx + vy + c2)))
    truncate = (SSIM_WIN // 2) / SSIM_SIGMA

    def blur(a):
        return ndimage.gaussian_filter(a, SSIM_SIGMA, truncate=truncate, mode="reflect")

    mx, my = blur(x), blur(y)
    vx = blur(x * x) - mx * mx
    vy = blur(y * y) - my * my
    cxy = blur(x * y) - mx * my
    smap = ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2))
    pad = SSIM_WIN // 2
    return float(smap[pad:-pad, pad:-pad].mean())


def ssim(ref, est, data_range: float | None = None) -> float:
    """Mean SSIM with an 11x11 Gaussian window (sigma 1.5), averaged over channels.

    ``data_range`` defaults to ``max(ref) - min(ref)``.
    """
    ref, est = _pair(ref, est)
    if data_range is None:
        data_range = float(ref.max() - ref.min())
        if data_range == 0.0:
            data_range = 1.0
    vals = [_ssim_plane(a, b, data_range) for a, b in zip(_planes(ref), _planes(est))]
    return float(np.mean(vals))


def _q_plane(x: np.ndarray, y: np.ndarray) -> tuple[float, int]:
    b = min(Q_BLOCK, *x.shape)

    def box(a):
        # valid-mode sliding b x b mean
        c = np.cumsum(np.cumsum(np.pad(a, ((1, 0), (1, 0))), axis=0), axis=1)
        s = c[b:, b:] - c[:-b, b:] - c[b:, :-b] + c[:-b, :-b]
        return s / (b * b)

    # center first to keep the variance estimates free of cancellation
    off = 0.5 * (x.mean() + y.mean())
    xc, yc = x - off, y - off
    mxc, myc = box(xc), box(yc)
    vx = np.maximum(box(xc * xc) - mxc * mxc, 0.0)
    vy = np.maximum(box(yc * yc) - myc * myc, 0.0)
    cxy = box(xc * yc) - mxc * myc
    mx, my = mxc + off, myc + off
    scale = max(float(np.mean(x * x) + np.mean(y * y)), 1e-300)
    var_sum = vx + vy
    mean_sq = mx * mx + my * my
    ok = (var_sum > 1e-12 * scale) & (mean_sq > 1e-12 * scale)
    if not ok.any():
        return 0.0, 0
    q = 4 * cxy[ok] * mx[ok] * my[ok] / (var_sum[ok] * mean_sq[ok])
    # |q| <= 1 exactly; box-filter round-off can overshoot slightly
    np.clip(q, -1.0, 1.0, out=q)
    return float(q.sum()), int(ok.sum())


def q_index(ref, est) -> float:
    """Universal image quality index over 8x8 sliding blocks.

    Blocks where both variances (or both means) vanish are skipped.
    """
    ref, est = _pair(ref, est)
    total, count = 0.0, 0
    for a, b in zip(_planes(ref), _planes(est)):
        s, c = _q_plane(a, b)
        total += s
        count += c
    if count == 0:
        raise InvalidInputError("q_index undefined: every block has zero variance")
    return total / count


def reinhard_tonemap(x, key: float | None = None) -> np.ndarray:
    """Map radiance ``L`` to ``L / (1 + L)`` in ``[0, 1)``.

    With ``key`` (Reinhard's middle-grey, e.g. 0.18) the input is first scaled
    by ``key / log-average(L)``.
    """
    arr = _as_array(x)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise InvalidInputError("tone mapping needs finite, non-negative samples")
    if key is not None:
        lum = arr.mean(axis=0) if arr.ndim == 3 else arr
        log_avg = math.exp(float(np.mean(np.log(1e-6 + lum))))
        arr = arr * (key / log_avg)
    return arr / (1.0 + arr)


def evaluate(ref, est, peak: float | None = None, align: bool = True) -> MetricsReport:
    """All three metrics; ``peak`` defaults to ``max(ref)``."""
    ref, est = _pair(ref, est)
    if align:
        est = align_mean(ref, est)
    if peak is None:
        peak = float(ref.max()) if ref.max() > 0 else 1.0
    return MetricsReport(psnr=psnr(ref, est, peak), ssim=ssim(ref, est), q_index=q_index(ref, est))

"""Shared image and sensor types.

Images are stored planar, as float64 arrays of shape ``(channels, height, width)``.
Instances are treated as immutable: the backing array is flagged read-only.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class InvalidInputError(ValueError):
    """Raised when an image, signal or parameter violates a precondition."""


class Path(str, enum.Enum):
    """Trajectory used when flattening a plane into a signal."""

    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"

    @classmethod
    def parse(cls, value: "str | Path") -> "Path":
        if isinstance(value, Path):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInputError(f"unknown path {value!r}; expected 'horizontal' or 'vertical'") from None


def _as_planar(data) -> np.ndarray:
    arr = np.array(data, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3:
        raise InvalidInputError(f"image data must be 2D or 3D (channels, h, w), got ndim={arr.ndim}")
    if arr.shape[0] not in (1, 3):
        raise InvalidInputError(f"channel count must be 1 or 3, got {arr.shape[0]}")
    if arr.shape[1] < 1 or arr.shape[2] < 1:
        raise InvalidInputError(f"empty image of shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class HdrImage:
    """Linear-radiance raster. ``data`` has shape ``(channels, height, width)``."""

    data: np.ndarray

    def __post_init__(self):
        arr = _as_planar(self.data)
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("HdrImage samples must be finite")
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_hwc(cls, arr) -> "HdrImage":
        """Build from an interleaved ``(h, w)`` or ``(h, w, c)`` array."""
        arr = np.asarray(arr)
        if arr.ndim == 3:
            arr = np.moveaxis(arr, -1, 0)
        return cls(arr)

    def to_hwc(self) -> np.ndarray:
        return np.moveaxis(self.data, 0, -1)

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape


@dataclass(frozen=True, eq=False)
class ModuloImage:
    """Wrapped measurement with every sample in ``[0, lam)``."""

    data: np.ndarray
    lam: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidInputError(f"lambda must be > 0, got {self.lam}")
        arr = _as_planar(self.data)
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("ModuloImage samples must be finite")
        if arr.min() < 0 or arr.max() >= self.lam:
            raise InvalidInputError(
                f"ModuloImage samples must lie in [0, {self.lam}), got range [{arr.min()}, {arr.max()}]"
            )
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape


@dataclass(frozen=True)
class SensorConfig:
    """Acquisition and reconstruction parameters.

    ``gamma=None`` means the default stripe threshold of ``lam / 2``.
    ``reproject`` snaps the destriped result back onto values congruent to
    the measurement modulo ``lam``.
    """

    lam: float = 1.0
    alpha: float = 1.0
    order: int = 2
    gamma: float | None = None
    path: Path = Path.HORIZONTAL
    destripe: bool = True
    threshold_keep: str = "large"
    reproject: bool = False

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidInputError(f"lambda must be > 0, got {self.lam}")
        if not self.alpha >= 1:
            raise InvalidInputError(f"alpha must be >= 1, got {self.alpha}")
        if int(self.order) != self.order or self.order < 1:
            raise InvalidInputError(f"order must be an integer >= 1, got {self.order}")
        if self.gamma is not None and not self.gamma >= 0:
            raise InvalidInputError(f"gamma must be >= 0, got {self.gamma}")
        if self.threshold_keep not in ("large", "small"):
            raise InvalidInputError(f"threshold_keep must be 'large' or 'small', got {self.threshold_keep!r}")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "path", Path.parse(self.path))

    @property
    def threshold(self) -> float:
        return self.lam / 2 if self.gamma is None else float(self.gamma)


@dataclass
class UnwrapResult:
    """Output of a 1D unwrapper.

    ``x_hat = y + lam * k_hat``; ``residual_integer_violation`` is the largest
    distance of ``(x_hat - y) / lam`` from an integer.
    """

    x_hat: np.ndarray
    k_hat: np.ndarray
    residual_integer_violation: float = field(default=0.0)


def broadcast_channels(image, op: Callable[[np.ndarray], np.ndarray], result_type=None, max_workers: int = 1):
    """Apply ``op`` to each channel plane independently and reassemble.

    The result is built as ``result_type`` (default: the input's type); a
    ``ModuloImage`` result keeps the input's ``lam``. With ``max_workers > 1``
    the planes are processed on a thread pool.
    """
    if not isinstance(image, (HdrImage, ModuloImage)):
        raise InvalidInputError(f"expected HdrImage or ModuloImage, got {type(image).__name__}")
    if image.channels not in (1, 3):
        raise InvalidInputError(f"channel count must be 1 or 3, got {image.channels}")
    if max_workers > 1 and image.channels > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            planes = list(pool.map(op, image.data))
    else:
        planes = [op(plane) for plane in image.data]
    planes = [np.asarray(p, dtype=np.float64) for p in planes]
    stacked = np.stack(planes)
    result_type = result_type or type(image)
    if result_type is ModuloImage:
        return ModuloImage(stacked, lam=getattr(image, "lam", 1.0))
    return result_type(stacked)

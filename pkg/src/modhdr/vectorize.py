"""Snake (boustrophedon) flattening of a plane into a 1D signal and its inverse.

Consecutive entries of the flattened signal are always 4-neighbours in the
plane, unlike plain column stacking, which jumps from the bottom of one column
to the top of the next.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_types import InvalidInputError, Path


@dataclass(frozen=True)
class SnakeLayout:
    width: int
    height: int
    path: Path = Path.HORIZONTAL

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidInputError(f"layout dimensions must be >= 1, got {self.width}x{self.height}")
        object.__setattr__(self, "path", Path.parse(self.path))

    @classmethod
    def for_plane(cls, plane, path=Path.HORIZONTAL) -> "SnakeLayout":
        h, w = np.shape(plane)
        return cls(width=w, height=h, path=path)

    @property
    def size(self) -> int:
        return self.width * self.height


def _check_plane(plane, layout: SnakeLayout) -> np.ndarray:
    plane = np.asarray(plane)
    if plane.shape != (layout.height, layout.width):
        raise InvalidInputError(
            f"plane shape {plane.shape} does not match layout {(layout.height, layout.width)}"
        )
    return plane


def snake_flatten(plane, layout: SnakeLayout) -> np.ndarray:
    """Flatten starting at the top-left corner.

    Horizontal: even rows left-to-right, odd rows right-to-left.
    Vertical: the same rule applied to columns.
    """
    plane = _check_plane(plane, layout)
    if layout.path is Path.VERTICAL:
        plane = plane.T
    out = np.array(plane, copy=True)
    out[1::2] = out[1::2, ::-1]
    return out.reshape(-1)


def snake_unflatten(v, layout: SnakeLayout) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1 or v.size != layout.size:
        raise InvalidInputError(f"signal of length {v.size} does not match layout size {layout.size}")
    if layout.path is Path.VERTICAL:
        out = v.reshape(layout.width, layout.height).copy()
        out[1::2] = out[1::2, ::-1]
        return out.T.copy()
    out = v.reshape(layout.height, layout.width).copy()
    out[1::2] = out[1::2, ::-1]
    return out


def snake_indices(layout: SnakeLayout) -> np.ndarray:
    """``(row, col)`` coordinates of each flattened position, shape ``(n, 2)``."""
    rows, cols = np.indices((layout.height, layout.width))
    r = snake_flatten(rows, layout)
    c = snake_flatten(cols, layout)
    return np.stack([r, c], axis=1)

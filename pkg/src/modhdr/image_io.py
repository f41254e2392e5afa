"""PFM / PPM file I/O and dataset ingestion.

PFM layout: ``PF`` (colour) or ``Pf`` (grey), whitespace, ``width height``,
whitespace, ``scale``, a single whitespace byte, then 32-bit floats with the
rows stored bottom-to-top. A negative scale means little-endian data.
"""

from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass
from pathlib import Path as FsPath

import numpy as np

from .core_types import HdrImage, InvalidInputError

log = logging.getLogger(__name__)

_WS = b" \t\r\n"
_NUM = re.compile(rb"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


class PfmError(InvalidInputError):
    """Malformed PFM data; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


@dataclass(frozen=True)
class PfmHeader:
    kind: str
    width: int
    height: int
    scale: float

    @property
    def channels(self) -> int:
        return 3 if self.kind == "PF" else 1

    @property
    def little_endian(self) -> bool:
        return self.scale < 0


def _skip_ws(buf: bytes, pos: int) -> int:
    while pos < len(buf) and buf[pos] in _WS:
        pos += 1
    return pos


def _token(buf: bytes, pos: int, what: str) -> tuple[bytes, int]:
    pos = _skip_ws(buf, pos)
    if pos >= len(buf):
        raise PfmError(f"unexpected end of header while reading {what}", pos)
    end = pos
    while end < len(buf) and buf[end] not in _WS:
        end += 1
    return buf[pos:end], end


def parse_pfm_header(buf: bytes) -> tuple[PfmHeader, int]:
    """Parse the header; returns it with the offset of the first payload byte."""
    if len(buf) < 2:
        raise PfmError("file too short for PFM magic", 0)
    magic = buf[:2]
    if magic not in (b"PF", b"Pf"):
        raise PfmError(f"bad magic {magic!r}, expected b'PF' or b'Pf'", 0)
    if len(buf) < 3 or buf[2] not in _WS:
        raise PfmError("magic must be followed by whitespace", 2)
    dims = []
    pos = 3
    for what in ("width", "height"):
        start = _skip_ws(buf, pos)
        tok, pos = _token(buf, pos, what)
        if not tok.isdigit():
            raise PfmError(f"invalid {what} {tok!r}", start)
        value = int(tok)
        if value < 1:
            raise PfmError(f"{what} must be >= 1, got {value}", start)
        dims.append(value)
    start = _skip_ws(buf, pos)
    tok, pos = _token(buf, pos, "scale")
    if not _NUM.fullmatch(tok):
        raise PfmError(f"invalid scale {tok!r}", start)
    scale = float(tok)
    if scale == 0.0:
        raise PfmError("scale must be non-zero", start)
    if pos >= len(buf):
        raise PfmError("missing whitespace after scale", pos)
    header = PfmHeader(kind=magic.decode(), width=dims[0], height=dims[1], scale=scale)
    return header, pos + 1


def read_pfm(data: bytes) -> HdrImage:
    """Decode PFM bytes into a top-to-bottom planar image scaled by ``|scale|``."""
    buf = bytes(data)
    header, start = parse_pfm_header(buf)
    c = header.channels
    expected = header.width * header.height * c * 4
    actual = len(buf) - start
    if actual < expected:
        raise PfmError(f"truncated payload: expected {expected} bytes, got {actual}", start + actual)
    dtype = "<f4" if header.little_endian else ">f4"
    arr = np.frombuffer(buf, dtype=dtype, count=header.width * header.height * c, offset=start)
    arr = arr.reshape(header.height, header.width, c)[::-1].astype(np.float64)
    if abs(header.scale) != 1.0:
        arr = arr * abs(header.scale)
    return HdrImage(np.moveaxis(arr, -1, 0))


def write_pfm(img: HdrImage) -> bytes:
    """Encode as little-endian PFM (scale ``-1``), rows bottom-to-top."""
    if not isinstance(img, HdrImage):
        img = HdrImage(img)
    if img.channels not in (1, 3):
        raise InvalidInputError(f"PFM supports 1 or 3 channels, got {img.channels}")
    kind = "PF" if img.channels == 3 else "Pf"
    header = f"{kind}\n{img.width} {img.height}\n-1.0\n".encode("ascii")
    payload = np.ascontiguousarray(img.to_hwc()[::-1], dtype="<f4").tobytes()
    return header + payload


def write_ppm8(img) -> bytes:
    """Binary P6 (maxval 255); grey images are replicated to RGB."""
    arr = img.data if isinstance(img, HdrImage) else np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[0] not in (1, 3):
        raise InvalidInputError(f"expected 1 or 3 channels, got shape {arr.shape}")
    if np.any(~np.isfinite(arr)) or arr.min() < 0 or arr.max() > 1:
        raise InvalidInputError("PPM export needs samples in [0, 1]")
    if arr.shape[0] == 1:
        arr = np.repeat(arr, 3, axis=0)
    q = np.floor(arr * 255 + 0.5).astype(np.uint8)
    h, w = q.shape[1:]
    return f"P6\n{w} {h}\n255\n".encode("ascii") + np.moveaxis(q, 0, -1).tobytes()


def load_pfm(path) -> HdrImage:
    return read_pfm(FsPath(path).read_bytes())


def save_pfm(path, img: HdrImage) -> None:
    FsPath(path).write_bytes(write_pfm(img))


def _area_weights(n_in: int, n_out: int) -> np.ndarray:
    """``(n_out, n_in)`` matrix averaging input cells by fractional overlap."""
    edges_out = np.linspace(0.0, n_in, n_out + 1)
    lo = np.maximum(edges_out[:-1, None], np.arange(n_in)[None, :])
    hi = np.minimum(edges_out[1:, None], np.arange(1, n_in + 1)[None, :])
    w = np.clip(hi - lo, 0.0, None)
    return w / w.sum(axis=1, keepdims=True)


def resize_area(img: HdrImage, height: int, width: int) -> HdrImage:
    """Area-average resampling (exact box filter for integer downscale factors)."""
    if height < 1 or width < 1:
        raise InvalidInputError(f"target size must be positive, got {height}x{width}")
    if (img.height, img.width) == (height, width):
        return img
    wr = _area_weights(img.height, height)
    wc = _area_weights(img.width, width)
    return HdrImage(wr @ img.data @ wc.T)


def normalize_max(img: HdrImage) -> HdrImage:
    """Divide by the image maximum so samples lie in [0, 1]."""
    peak = float(img.data.max())
    if not peak > 0:
        raise InvalidInputError("cannot normalize an image with no positive samples")
    return HdrImage(np.clip(img.data / peak, 0.0, 1.0))


def load_dataset(directory, size: int | tuple[int, int] | None = None) -> list[tuple[str, HdrImage]]:
    """Load every ``*.pfm`` under ``directory`` (name-sorted), resized and max-normalized.

    Unreadable files are skipped with a warning. Raises if nothing loads.
    """
    directory = FsPath(directory)
    if not directory.is_dir():
        raise InvalidInputError(f"not a directory: {directory}")
    if isinstance(size, int):
        size = (size, size)
    names = sorted(p for p in os.listdir(directory) if p.lower().endswith(".pfm"))
    out = []
    for name in names:
        try:
            img = load_pfm(directory / name)
            if size is not None:
                img = resize_area(img, *size)
            img = HdrImage(np.clip(img.data, 0.0, None))
            img = normalize_max(img)
        except (OSError, InvalidInputError) as exc:
            log.warning("skipping %s: %s", name, exc)
            continue
        out.append((FsPath(name).stem, img))
    if not out:
        raise InvalidInputError(f"no readable PFM images in {directory}")
    return out

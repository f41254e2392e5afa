"""HDR recovery from modulo-camera measurements.

Pipeline per channel: snake-flatten the wrapped plane, recover the wrap counts
with autoregressive high-order finite-difference unwrapping (closed-form DCT
solves), fold back to 2D and remove residual stripe artifacts.
"""

__version__ = "0.1.0"

from .core_types import (
    HdrImage,
    InvalidInputError,
    ModuloImage,
    Path,
    SensorConfig,
    UnwrapResult,
    broadcast_channels,
)
from .destripe import hard_threshold, remove_stripes, reproject
from .finite_diff import adjoint_diff, cumsum, forward_diff, high_order_diff, itoh_margin
from .image_io import PfmError, PfmHeader, load_dataset, load_pfm, read_pfm, save_pfm, write_pfm, write_ppm8
from .metrics import MetricsReport, align_mean, evaluate, psnr, q_index, reinhard_tonemap, ssim
from .pipeline import SweepConfig, recover_image, run_sweep, rows_to_csv, synthetic_dataset, wrap_violation
from .sensing import centered_wrap, modulo_wrap, simulate_ccd, simulate_modulo
from .spectral import dct, dct2, idct, idct2, solve_diff_least_squares, solve_poisson_2d
from .unwrap import autoregressive_unwrap, residual_epsilon, rowwise_unwrap, usf_unwrap
from .vectorize import SnakeLayout, snake_flatten, snake_unflatten

__all__ = [
    "HdrImage", "InvalidInputError", "ModuloImage", "Path", "SensorConfig", "UnwrapResult", "broadcast_channels",
    "hard_threshold", "remove_stripes", "reproject",
    "adjoint_diff", "cumsum", "forward_diff", "high_order_diff", "itoh_margin",
    "PfmError", "PfmHeader", "load_dataset", "load_pfm", "read_pfm", "save_pfm", "write_pfm", "write_ppm8",
    "MetricsReport", "align_mean", "evaluate", "psnr", "q_index", "reinhard_tonemap", "ssim",
    "SweepConfig", "recover_image", "run_sweep", "rows_to_csv", "synthetic_dataset", "wrap_violation",
    "centered_wrap", "modulo_wrap", "simulate_ccd", "simulate_modulo",
    "dct", "dct2", "idct", "idct2", "solve_diff_least_squares", "solve_poisson_2d",
    "autoregressive_unwrap", "residual_epsilon", "rowwise_unwrap", "usf_unwrap",
    "SnakeLayout", "snake_flatten", "snake_unflatten",
]

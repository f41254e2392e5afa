import math

import numpy as np
import pytest

from modhdr import HdrImage, InvalidInputError, align_mean, evaluate, psnr, q_index, reinhard_tonemap, ssim


def ramp(h=32, w=32):
    yy, xx = np.mgrid[:h, :w].astype(float)
    return 0.2 + (yy + 2 * xx) / (h + 2 * w) + 0.05 * np.sin(xx / 3)


def test_psnr_examples():
    r = ramp()
    assert psnr(r, r) == math.inf
    assert psnr(r, r + 0.1, 1.0) == pytest.approx(20.0, abs=1e-9)
    assert psnr(r, r + 0.01, 1.0) == pytest.approx(40.0, abs=1e-9)
    assert psnr(r, r + 0.1, 2.0) == pytest.approx(20.0 + 20 * math.log10(2), abs=1e-9)


def test_psnr_symmetric_and_validated():
    rng = np.random.default_rng(0)
    a, b = rng.random((3, 9, 9)), rng.random((3, 9, 9))
    assert psnr(a, b) == psnr(b, a)
    with pytest.raises(InvalidInputError):
        psnr(a, b[:, :-1])
    with pytest.raises(InvalidInputError):
        psnr(a, b, peak=0)


def test_ssim_identity_and_penalties():
    r = ramp()
    assert ssim(r, r) == pytest.approx(1.0, abs=1e-12)
    assert ssim(r, 1.0 - r) < 0
    assert ssim(r, 2 * r) < 1.0
    small = ramp(6, 6)
    assert ssim(small, small) == pytest.approx(1.0)
    assert ssim(small, 1 - small) < 0


def test_ssim_symmetric_with_fixed_range():
    rng = np.random.default_rng(1)
    a, b = rng.random((20, 20)), rng.random((20, 20))
    assert ssim(a, b, data_range=1.0) == pytest.approx(ssim(b, a, data_range=1.0), abs=1e-14)


def test_ssim_matches_scikit_image():
    metrics = pytest.importorskip("skimage.metrics")
    rng = np.random.default_rng(2)
    ref = ramp(40, 48)
    est = ref + 0.05 * rng.normal(size=ref.shape)
    expected = metrics.structural_similarity(
        ref, est, data_range=float(np.ptp(ref)), gaussian_weights=True, sigma=1.5, use_sample_covariance=False
    )
    assert ssim(ref, est) == pytest.approx(expected, abs=1e-6)


def test_q_index():
    r = ramp()
    assert q_index(r, r) == pytest.approx(1.0, abs=1e-12)
    assert q_index(r, r) <= 1.0
    assert q_index(r, r + 0.5) < 1.0
    rng = np.random.default_rng(3)
    assert abs(q_index(rng.random((64, 64)), rng.random((64, 64)))) < 0.1
    with pytest.raises(InvalidInputError):
        q_index(np.ones((16, 16)), np.ones((16, 16)))


def test_q_index_blockwise_reference():
    # brute-force 8x8 sliding windows, direct formula
    rng = np.random.default_rng(4)
    a = rng.random((12, 13)) + 1
    b = a + 0.3 * rng.random((12, 13))
    vals = []
    for i in range(a.shape[0] - 7):
        for j in range(a.shape[1] - 7):
            x, y = a[i:i + 8, j:j + 8], b[i:i + 8, j:j + 8]
            mx, my = x.mean(), y.mean()
            cxy = np.mean((x - mx) * (y - my))
            vals.append(4 * cxy * mx * my / ((x.var() + y.var()) * (mx**2 + my**2)))
    assert q_index(a, b) == pytest.approx(np.mean(vals), abs=1e-10)


def test_reinhard():
    out = reinhard_tonemap(np.array([0.0, 1.0, 3.0, 1e6]))
    assert out.tolist()[:3] == [0.0, 0.5, 0.75]
    assert np.all(np.diff(out) > 0) and out.max() < 1
    with pytest.raises(InvalidInputError):
        reinhard_tonemap(np.array([[-0.1]]))
    keyed = reinhard_tonemap(HdrImage(np.full((3, 4, 4), 2.0)), key=0.18)
    assert np.allclose(keyed, 0.18 / 1.18, rtol=1e-5)


def test_align_and_evaluate():
    r = ramp()[None].repeat(3, axis=0)
    est = r + 2.0
    assert np.allclose(align_mean(r, est), r)
    rep = evaluate(r, est)
    assert rep.psnr == math.inf and rep.ssim == pytest.approx(1.0) and rep.q_index == pytest.approx(1.0)
    assert evaluate(r, est, align=False).psnr < 20


def test_align_mean_per_channel():
    r = ramp()[None].repeat(3, axis=0)
    est = r + np.array([0.0, 1.0, -2.0])[:, None, None]
    assert np.allclose(align_mean(r, est), r)
    assert np.allclose(align_mean(r[0], r[0] + 3.0), r[0])

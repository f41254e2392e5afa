import struct

import numpy as np
import pytest

from modhdr import HdrImage, InvalidInputError, PfmError, load_dataset, read_pfm, save_pfm, write_pfm, write_ppm8
from modhdr.image_io import parse_pfm_header, resize_area

from pfm_corpus import MALFORMED


def test_single_pixel_decode():
    img = read_pfm(b"PF\n1 1\n-1.0\n" + struct.pack("<3f", 0.5, 0.25, 1.0))
    assert img.data.ravel().tolist() == [0.5, 0.25, 1.0]


def test_big_endian_and_scale():
    img = read_pfm(b"Pf\n2 1\n2.0\n" + struct.pack(">2f", 1.5, 3.0))
    assert img.channels == 1 and img.data.ravel().tolist() == [3.0, 6.0]


def test_rows_stored_bottom_to_top():
    data = np.arange(6, dtype=float).reshape(1, 2, 3)
    raw = write_pfm(HdrImage(data))
    payload = np.frombuffer(raw[len(b"Pf\n3 2\n-1.0\n"):], "<f4")
    assert payload.tolist() == [3, 4, 5, 0, 1, 2]


def test_header_grammar():
    raw = write_pfm(HdrImage(np.zeros((3, 2, 5))))
    assert raw.startswith(b"PF\n5 2\n-1.0\n")
    assert len(raw) == len(b"PF\n5 2\n-1.0\n") + 5 * 2 * 3 * 4
    header, start = parse_pfm_header(b"PF  4\t3\r\n-1\n")
    assert (header.width, header.height, header.scale, start) == (4, 3, -1.0, len(b"PF  4\t3\r\n-1\n"))


@pytest.mark.parametrize("channels", [1, 3])
def test_round_trip_bit_exact(channels):
    rng = np.random.default_rng(channels)
    data = (rng.random((channels, 7, 11)) * 100).astype(np.float32).astype(np.float64)
    back = read_pfm(write_pfm(HdrImage(data)))
    assert np.array_equal(back.data, data)


def test_write_rejects_empty_and_bad_channels():
    with pytest.raises(InvalidInputError):
        write_pfm(np.zeros((3, 0, 2)))
    with pytest.raises(InvalidInputError):
        write_pfm(np.zeros((2, 2, 2)))


@pytest.mark.parametrize("name", sorted(MALFORMED))
def test_malformed_rejected_with_offset(name):
    data, offset = MALFORMED[name]
    with pytest.raises(PfmError) as err:
        read_pfm(data)
    assert err.value.offset == offset
    assert f"at byte {offset}" in str(err.value)


def test_truncation_message_names_sizes():
    data, _ = MALFORMED["truncated payload"]
    with pytest.raises(PfmError, match="expected 24 bytes, got 12"):
        read_pfm(data)


def test_ppm_examples():
    raw = write_ppm8(np.array([[1.0, 0.0, 0.5, 0.5 / 255]]))
    head = b"P6\n4 1\n255\n"
    assert raw.startswith(head)
    assert list(raw[len(head):]) == [255] * 3 + [0] * 3 + [128] * 3 + [1] * 3
    with pytest.raises(InvalidInputError):
        write_ppm8(np.array([[1.2]]))
    with pytest.raises(InvalidInputError):
        write_ppm8(np.array([[-0.01]]))


def test_resize_area_box_average():
    data = np.arange(16, dtype=float).reshape(1, 4, 4)
    out = resize_area(HdrImage(data), 2, 2).data[0]
    assert np.allclose(out, [[2.5, 4.5], [10.5, 12.5]])
    assert resize_area(HdrImage(data), 3, 5).data.mean() == pytest.approx(data.mean())


def test_load_dataset(tmp_path, caplog):
    rng = np.random.default_rng(0)
    for name in ("b", "a", "c"):
        save_pfm(tmp_path / f"{name}.pfm", HdrImage(rng.random((3, 8, 8)) * 7))
    (tmp_path / "broken.pfm").write_bytes(b"PF\n8 8\n-1\n")
    (tmp_path / "notes.txt").write_text("ignored")
    ds = load_dataset(tmp_path, size=4)
    assert [n for n, _ in ds] == ["a", "b", "c"]
    assert all(img.data.max() == 1.0 and img.data.min() >= 0 and img.shape == (3, 4, 4) for _, img in ds)
    assert "broken.pfm" in caplog.text
    again = load_dataset(tmp_path, size=4)
    assert all(np.array_equal(a.data, b.data) for (_, a), (_, b) in zip(ds, again))


def test_load_dataset_empty(tmp_path):
    with pytest.raises(InvalidInputError):
        load_dataset(tmp_path)
    with pytest.raises(InvalidInputError):
        load_dataset(tmp_path / "missing")

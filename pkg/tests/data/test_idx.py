import pytest
import numpy as np

from msgprol.core.errors import DataIOError, FormatError, LengthError
from msgprol.data.idx import decode_idx, encode_idx, load_idx, parse_idx_header
from msgprol.data.streams import load_mnist_images, pad_images

FIXTURE = bytes([0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 0, 255, 128, 64])


def test_parse_header_of_image_file():
    magic, dims, offset = parse_idx_header(FIXTURE)
    assert magic == 0x803
    assert dims == (1, 2, 2)
    assert offset == 16

def test_parse_header_of_label_file():
    magic, dims, _ = parse_idx_header(bytes([0, 0, 8, 1, 0, 0, 0, 3, 1, 2, 3]))
    assert magic == 0x801
    assert dims == (3,)

def test_decode_scales_bytes():
    data = decode_idx(FIXTURE)
    assert data.shape == (1, 2, 2)
    np.testing.assert_allclose(data.ravel(), [0.0, 1.0, 128 / 255, 64 / 255])

def test_decode_labels_unscaled():
    raw = bytes([0, 0, 8, 1, 0, 0, 0, 3, 7, 0, 9])
    np.testing.assert_array_equal(decode_idx(raw, scale=False), [7, 0, 9])

def test_bad_magic_rejected():
    with pytest.raises(FormatError, match="magic"):
        decode_idx(bytes([1, 0]) + FIXTURE[2:])

def test_unsupported_type_rejected():
    with pytest.raises(FormatError, match="type"):
        decode_idx(bytes([0, 0, 0x0D]) + FIXTURE[3:])

def test_truncated_payload_rejected():
    with pytest.raises(LengthError):
        decode_idx(FIXTURE[:-1])

@pytest.mark.parametrize("cut", [2, 10])
def test_truncated_header_rejected(cut):
    with pytest.raises(LengthError):
        decode_idx(FIXTURE[:cut])

def test_encode_builds_fixture():
    assert encode_idx(np.array([[[0, 255], [128, 64]]])) == FIXTURE

def test_load_idx_from_file(tmp_path):
    path = tmp_path / "images.idx"
    path.write_bytes(FIXTURE)
    assert load_idx(path).shape == (1, 2, 2)

def test_load_idx_missing_file(tmp_path):
    with pytest.raises(DataIOError):
        load_idx(tmp_path / "absent")

def test_pad_images_centres_content():
    padded = pad_images(np.ones((2, 28, 28)), 32)
    assert padded.shape == (2, 32, 32)
    assert padded.sum() == 2 * 28 * 28
    assert padded[0, 2, 2] == 1.0 and padded[0, 1, 1] == 0.0

def test_load_mnist_images_flattens(tmp_path):
    path = tmp_path / "train-images-idx3-ubyte"
    path.write_bytes(encode_idx(np.full((3, 28, 28), 255)))
    images = load_mnist_images(path)
    assert images.shape == (3, 1024)
    assert images.sum() == pytest.approx(3 * 784)
    assert load_mnist_images(path, pad_to_32=False).shape == (3, 784)

import pytest
import numpy as np

from msgprol.core.errors import DataIOError, ParseError, ShapeError
from msgprol.data.checkpoint import MANIFEST_NAME, load_checkpoint, restore_checkpoint, save_checkpoint
from msgprol.data.matrix_csv import read_matrix_csv, write_matrix_csv
from msgprol.graph.prolongation import closed_form_local_1d
from msgprol.msann.hierarchy import build_hierarchy


def local_factory(n_fine: int, n_coarse: int) -> np.ndarray:
    return closed_form_local_1d(n_coarse)


# --- Matrix CSV ---

def test_matrix_csv_preserves_doubles(tmp_path, rng):
    m = rng.normal(size=(3, 5))
    loaded = read_matrix_csv(write_matrix_csv(m, tmp_path / "m.csv"))
    np.testing.assert_array_equal(loaded, m)

def test_matrix_csv_single_row_stays_two_dimensional(tmp_path):
    loaded = read_matrix_csv(write_matrix_csv(np.array([1.0, 2.0]), tmp_path / "row.csv"))
    assert loaded.shape == (1, 2)

def test_matrix_csv_empty_path():
    with pytest.raises(DataIOError):
        write_matrix_csv(np.eye(2), "")

def test_matrix_csv_missing_file(tmp_path):
    with pytest.raises(DataIOError, match="does not exist"):
        read_matrix_csv(tmp_path / "absent.csv")

def test_matrix_csv_malformed(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3,x\n")
    with pytest.raises(ParseError):
        read_matrix_csv(path)

# --- Checkpoints ---

def test_checkpoint_round_trip(tmp_path, rng):
    h = build_hierarchy([8, 4, 8], 1, local_factory, "1d", rng)
    h.levels[1].thetas[1] += 0.5
    h.refresh(1)
    manifest = save_checkpoint(h, tmp_path / "ckpt")
    assert (tmp_path / "ckpt" / MANIFEST_NAME).is_file()
    assert len(manifest.entries) == 8
    assert manifest.entries[1].role == "bias"

    other = build_hierarchy([8, 4, 8], 1, local_factory, "1d", np.random.default_rng(99))
    restore_checkpoint(other, tmp_path / "ckpt")
    for a, b in zip(h.composite, other.composite):
        np.testing.assert_array_equal(a, b)

def test_load_checkpoint_shapes(tmp_path, rng):
    h = build_hierarchy([8, 4, 8], 1, local_factory, "1d", rng)
    save_checkpoint(h, tmp_path)
    levels = load_checkpoint(tmp_path)
    assert [t.shape for t in levels[1]] == [(4, 2), (2,), (2, 4), (4,)]

def test_restore_checkpoint_depth_mismatch(tmp_path, rng):
    save_checkpoint(build_hierarchy([8, 4, 8], 1, local_factory, "1d", rng), tmp_path)
    with pytest.raises(ShapeError):
        restore_checkpoint(build_hierarchy([8, 4, 8], 0, local_factory, "1d", rng), tmp_path)

def test_load_checkpoint_missing_manifest(tmp_path):
    with pytest.raises(DataIOError):
        load_checkpoint(tmp_path)

def test_load_checkpoint_malformed_manifest(tmp_path):
    (tmp_path / MANIFEST_NAME).write_text("{not json")
    with pytest.raises(ParseError):
        load_checkpoint(tmp_path)

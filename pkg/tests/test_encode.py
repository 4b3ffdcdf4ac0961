"""Positional encodings and padded index batches."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from pqa import Grid, Rng
from pqa.encode import (
    PAD_INDEX,
    export_index_batch,
    export_pe_table,
    pe_2d,
    pe_axis,
    pe_table,
    to_indices,
    unpad,
)


def test_pe_axis_position_zero_alternates():
    v = pe_axis(0, 8)
    assert np.array_equal(v, np.array([0.0, 1.0] * 4))


def test_pe_axis_position_one_matches_closed_form():
    v = pe_axis(1, 2)
    # d_axis=2 means full d=4; entry pair k=0 uses 10000^0 = 1
    assert v[0] == pytest.approx(math.sin(1.0))
    assert v[1] == pytest.approx(math.cos(1.0))
    assert v[0] == pytest.approx(0.84147, abs=1e-5)
    assert v[1] == pytest.approx(0.54030, abs=1e-5)


def test_pe_axis_frequencies_use_full_dimension():
    d_axis = 8
    v = pe_axis(3, d_axis)
    for k in range(d_axis // 2):
        denom = 10000.0 ** (2 * k / (2 * d_axis))
        assert v[2 * k] == pytest.approx(math.sin(3 / denom))
        assert v[2 * k + 1] == pytest.approx(math.cos(3 / denom))


def test_pe_axis_bounds_and_validation():
    assert np.all(np.abs(pe_axis(29, 64)) <= 1.0)
    with pytest.raises(ValueError):
        pe_axis(1, 3)
    with pytest.raises(ValueError):
        pe_axis(-1, 4)


def test_pe_2d_axis_separation():
    first = pe_2d(5, 0, 16)[:8]
    for j in (1, 7, 29):
        assert np.array_equal(pe_2d(5, j, 16)[:8], first)
    second = pe_2d(0, 9, 16)[8:]
    for i in (2, 11, 28):
        assert np.array_equal(pe_2d(i, 9, 16)[8:], second)


def test_pe_2d_origin():
    assert np.array_equal(pe_2d(0, 0, 8), np.array([0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]))


def test_pe_2d_validation():
    with pytest.raises(ValueError):
        pe_2d(0, 0, 6)
    with pytest.raises(ValueError):
        pe_2d(30, 0, 8)


def test_all_positions_distinct_at_512():
    table = pe_table(512).reshape(900, 512)
    assert np.all(np.abs(table) <= 1.0)
    unique = np.unique(table, axis=0)
    assert unique.shape[0] == 900


def test_positions_distinct_even_at_minimal_dimension():
    table = pe_table(4).reshape(900, 4)
    assert np.unique(table, axis=0).shape[0] == 900


def test_table_matches_pointwise():
    table = pe_table(16)
    for i, j in [(0, 0), (3, 17), (29, 29)]:
        assert np.array_equal(table[i, j], pe_2d(i, j, 16))


# -- batches -----------------------------------------------------------------------


def test_single_grid_no_padding():
    g = Grid.from_rows([[1, 2], [3, 4]])
    batch = to_indices([g])
    assert batch.shape == (1, 2, 2)
    assert batch.mask.all()
    assert np.array_equal(batch.indices[0], g.array)


def test_mixed_batch_padding_arithmetic():
    g2 = Grid.filled(2, 2, 1)
    g3 = Grid.filled(3, 3, 2)
    batch = to_indices([g2, g3])
    assert batch.shape == (2, 3, 3)
    assert int(np.count_nonzero(batch.indices[0] == PAD_INDEX)) == 5
    assert int(np.count_nonzero(batch.indices[1] == PAD_INDEX)) == 0


def test_unpad_inverse():
    rng = Rng(70, 0)
    grids = []
    for _ in range(6):
        w, h = rng.randint(1, 9), rng.randint(1, 9)
        grids.append(Grid(rng.randints(0, 9, w * h).reshape(h, w)))
    back = unpad(to_indices(grids))
    assert all(a == b for a, b in zip(grids, back))


def test_empty_batch_rejected():
    with pytest.raises(ValueError):
        to_indices([])


# -- binary export -------------------------------------------------------------------


def test_pe_export_little_endian_float32(tmp_path):
    bin_path = export_pe_table(tmp_path / "pe", d=8)
    header = json.loads((tmp_path / "pe.json").read_text())
    assert header == {"dims": [30, 30, 8], "d": 8, "dtype": "float32-le", "layout": "row-major"}
    raw = np.frombuffer(bin_path.read_bytes(), dtype="<f4").reshape(30, 30, 8)
    assert np.allclose(raw, pe_table(8), atol=1e-6)


def test_index_export_layout(tmp_path):
    batch = to_indices([Grid.filled(2, 2, 3), Grid.filled(4, 3, 5)])
    bin_path = export_index_batch(tmp_path / "grids", batch)
    header = json.loads((tmp_path / "grids.json").read_text())
    n, h, w = header["dims"]
    assert (n, h, w) == batch.shape
    assert header["padding_index"] == PAD_INDEX
    raw = np.frombuffer(bin_path.read_bytes(), dtype=np.uint8).reshape(n, h, w)
    assert np.array_equal(raw, batch.indices)
    mask = np.frombuffer((tmp_path / "grids.mask.bin").read_bytes(), dtype=np.uint8).reshape(n, h, w)
    assert np.array_equal(mask.astype(bool), batch.mask)

"""Numeric exports for external ML consumers.

Two representations are produced: padded symbol-index batches (padding
index 10, one past the symbol alphabet) and a 2D sinusoidal positional
encoding where the row and column encodings are computed independently
and concatenated. Inside each axis, entry 2k is sin(pos / 10000^(2k/d))
and entry 2k+1 the matching cosine, with d the full embedding dimension
(each axis spans d/2 entries but keeps full-d frequencies).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import MAX_SIDE, Grid

PAD_INDEX = 10


def pe_axis(pos: int, d_axis: int) -> np.ndarray:
    """Sinusoidal encoding of one coordinate over d_axis entries."""
    if d_axis <= 0 or d_axis % 2:
        raise ValueError(f"d_axis must be a positive even integer, got {d_axis}")
    if pos < 0:
        raise ValueError("pos must be >= 0")
    d_full = 2 * d_axis
    k = np.arange(d_axis // 2, dtype=np.float64)
    angles = pos / np.power(10000.0, 2.0 * k / d_full)
    out = np.empty(d_axis, dtype=np.float64)
    out[0::2] = np.sin(angles)
    out[1::2] = np.cos(angles)
    return out


def pe_2d(i: int, j: int, d: int) -> np.ndarray:
    """Concatenated encodings of the two grid coordinates; len(d)."""
    if d <= 0 or d % 4:
        raise ValueError(f"d must be a positive multiple of 4, got {d}")
    if not (0 <= i < MAX_SIDE and 0 <= j < MAX_SIDE):
        raise ValueError(f"position ({i}, {j}) outside 0..{MAX_SIDE - 1}")
    return np.concatenate([pe_axis(i, d // 2), pe_axis(j, d // 2)])


def pe_table(d: int) -> np.ndarray:
    """The full (30, 30, d) table of positional encodings."""
    if d <= 0 or d % 4:
        raise ValueError(f"d must be a positive multiple of 4, got {d}")
    axis = np.stack([pe_axis(p, d // 2) for p in range(MAX_SIDE)])
    table = np.empty((MAX_SIDE, MAX_SIDE, d), dtype=np.float64)
    table[:, :, : d // 2] = axis[:, None, :]
    table[:, :, d // 2 :] = axis[None, :, :]
    return table


@dataclass(frozen=True)
class PaddedBatch:
    """Grids padded to a common shape; mask marks the real cells."""

    indices: np.ndarray  # (n, H, W) uint8, padded cells = PAD_INDEX
    mask: np.ndarray  # (n, H, W) bool

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.indices.shape


def to_indices(grids: list[Grid]) -> PaddedBatch:
    """Pad a batch to its max height/width with the padding index."""
    if not grids:
        raise ValueError("batch must be non-empty")
    H = max(g.height for g in grids)
    W = max(g.width for g in grids)
    indices = np.full((len(grids), H, W), PAD_INDEX, dtype=np.uint8)
    mask = np.zeros((len(grids), H, W), dtype=bool)
    for n, g in enumerate(grids):
        indices[n, : g.height, : g.width] = g.array
        mask[n, : g.height, : g.width] = True
    return PaddedBatch(indices, mask)


def unpad(batch: PaddedBatch) -> list[Grid]:
    """Recover the original grids from a padded batch."""
    out = []
    for n in range(batch.indices.shape[0]):
        m = batch.mask[n]
        h = int(m.any(axis=1).sum())
        w = int(m.any(axis=0).sum())
        out.append(Grid(batch.indices[n, :h, :w]))
    return out


# -- binary export ------------------------------------------------------------
# Little-endian float32 for encodings, uint8 for index batches; every
# .bin is paired with a .json header describing dims and layout.


def export_pe_table(path: Path | str, d: int = 512) -> Path:
    path = Path(path)
    table = pe_table(d).astype("<f4")
    path.with_suffix(".bin").write_bytes(table.tobytes(order="C"))
    header = {"dims": [MAX_SIDE, MAX_SIDE, d], "d": d, "dtype": "float32-le", "layout": "row-major"}
    path.with_suffix(".json").write_text(json.dumps(header, indent=2) + "\n")
    return path.with_suffix(".bin")


def export_index_batch(path: Path | str, batch: PaddedBatch) -> Path:
    path = Path(path)
    n, h, w = batch.shape
    path.with_suffix(".bin").write_bytes(np.ascontiguousarray(batch.indices).tobytes(order="C"))
    path.with_suffix(".mask.bin").write_bytes(np.ascontiguousarray(batch.mask).astype(np.uint8).tobytes(order="C"))
    header = {
        "dims": [n, h, w],
        "d": None,
        "dtype": "uint8",
        "layout": "row-major",
        "padding_index": PAD_INDEX,
        "mask": path.with_suffix(".mask.bin").name,
    }
    path.with_suffix(".json").write_text(json.dumps(header, indent=2) + "\n")
    return path.with_suffix(".bin")

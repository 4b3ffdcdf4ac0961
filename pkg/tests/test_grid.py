"""Grid primitives: hand-checked examples, laws, and brute-force cross-checks."""

from __future__ import annotations

import numpy as np
import pytest

from pqa import (
    Coord,
    Grid,
    GridError,
    block_sample,
    connected_components,
    diff_count,
    flood_fill,
    reflect,
    rotate90,
    scale_up,
)
from pqa.rng import Rng


def g(rows):
    return Grid.from_rows(rows)


# -- construction and validation ------------------------------------------------


def test_dims_bounds():
    Grid.filled(1, 1)
    Grid.filled(30, 30)
    with pytest.raises(GridError):
        Grid(np.zeros((31, 5), dtype=np.uint8))
    with pytest.raises(GridError):
        Grid(np.zeros((0, 5), dtype=np.uint8))


def test_symbol_range_checked():
    with pytest.raises(GridError):
        g([[0, 11]])
    with pytest.raises(GridError):
        g([[-1]])


def test_ragged_rows_rejected():
    with pytest.raises(GridError):
        g([[0, 1], [2]])


def test_get_set_single_cell():
    assert g([[7]]).get((0, 0)) == 7
    assert g([[0]]).set((0, 0), 3) == g([[3]])


def test_read_after_write_law():
    rng = Rng(3, 0)
    for _ in range(50):
        w, h = rng.randint(1, 12), rng.randint(1, 12)
        grid = Grid(rng.randints(0, 9, w * h).reshape(h, w))
        c = Coord(rng.randint(0, w - 1), rng.randint(0, h - 1))
        s = rng.randint(0, 9)
        assert grid.set(c, s).get(c) == s


def test_out_of_bounds():
    grid = g([[1, 2], [3, 4]])
    with pytest.raises(GridError):
        grid.get((2, 0))
    with pytest.raises(GridError):
        grid.set((0, 5), 1)


def test_grids_immutable():
    grid = g([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        grid.array[0, 0] = 5
    grid.set((0, 0), 9)
    assert grid.get((0, 0)) == 1


# -- connected components ---------------------------------------------------------


def _brute_components(grid: Grid, connectivity: int):
    """Independent reference: BFS over same-colored cells."""
    a = grid.array
    h, w = a.shape
    if connectivity == 8:
        deltas = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
    else:
        deltas = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    seen = set()
    comps = []
    for r in range(h):
        for c in range(w):
            if a[r, c] == 0 or (r, c) in seen:
                continue
            color = a[r, c]
            stack = [(r, c)]
            seen.add((r, c))
            cells = set()
            while stack:
                cr, cc = stack.pop()
                cells.add((cr, cc))
                for dr, dc in deltas:
                    nr, nc = cr + dr, cc + dc
                    if 0 <= nr < h and 0 <= nc < w and (nr, nc) not in seen and a[nr, nc] == color:
                        seen.add((nr, nc))
                        stack.append((nr, nc))
            comps.append((int(color), frozenset(Coord(cc, cr) for cr, cc in cells)))
    return comps


def test_components_diagonal_adjacency():
    grid = g([[2, 0], [0, 2]])
    assert len(connected_components(grid, connectivity=8)) == 1
    assert len(connected_components(grid, connectivity=4)) == 2


def test_components_empty_grid():
    assert connected_components(Grid.filled(4, 4)) == []


def test_components_match_brute_force():
    rng = Rng(5, 0)
    for _ in range(80):
        side = rng.randint(1, 6)
        grid = Grid(rng.randints(0, 3, side * side).reshape(side, side))
        for conn in (4, 8):
            got = {(c.color, c.cells) for c in connected_components(grid, connectivity=conn)}
            want = set(_brute_components(grid, conn))
            assert got == want


def test_components_partition_foreground():
    rng = Rng(6, 0)
    for _ in range(30):
        grid = Grid(rng.randints(0, 4, 64).reshape(8, 8))
        comps = connected_components(grid, connectivity=8)
        all_cells = [c for comp in comps for c in comp.cells]
        assert len(all_cells) == len(set(all_cells))  # disjoint
        fg = {Coord(int(c), int(r)) for r, c in zip(*np.nonzero(grid.array))}
        assert set(all_cells) == fg  # coverage


def test_component_bbox_minimal():
    rng = Rng(7, 0)
    for _ in range(30):
        grid = Grid(rng.randints(0, 3, 49).reshape(7, 7))
        for comp in connected_components(grid):
            c0, r0, c1, r1 = comp.bbox
            cols = {c.col for c in comp.cells}
            rows = {c.row for c in comp.cells}
            # shrinking any side would exclude a member cell
            assert min(cols) == c0 and max(cols) == c1
            assert min(rows) == r0 and max(rows) == r1


# -- flood fill --------------------------------------------------------------------


def test_flood_fill_whole_background():
    out = flood_fill(Grid.filled(3, 3), (0, 0), paint=1)
    assert out == Grid.filled(3, 3, 1)


def test_flood_fill_blocked_by_ring():
    ring = g(
        [
            [0, 0, 0, 0, 0],
            [0, 3, 3, 3, 0],
            [0, 3, 0, 3, 0],
            [0, 3, 3, 3, 0],
            [0, 0, 0, 0, 0],
        ]
    )
    out = flood_fill(ring, (2, 2), paint=5)
    assert out.get((2, 2)) == 5
    assert out.get((0, 0)) == 0  # did not escape the ring


def test_flood_fill_idempotent():
    rng = Rng(8, 0)
    for _ in range(25):
        grid = Grid(rng.randints(0, 2, 36).reshape(6, 6))
        seed = (rng.randint(0, 5), rng.randint(0, 5))
        once = flood_fill(grid, seed, paint=7)
        assert flood_fill(once, seed, paint=7) == once


def test_flood_fill_partition():
    rng = Rng(9, 0)
    for _ in range(25):
        grid = Grid(rng.randints(0, 2, 36).reshape(6, 6))
        seed = (rng.randint(0, 5), rng.randint(0, 5))
        out = flood_fill(grid, seed, paint=9)
        delta = grid.array != out.array
        if delta.any():
            # painted region is one connected block containing the seed
            comps = connected_components(out, connectivity=4, foreground=lambda s: s == 9)
            painted = {Coord(int(c), int(r)) for r, c in zip(*np.nonzero(delta))}
            containing = [cp for cp in comps if Coord(*seed) in cp.cells]
            assert len(containing) == 1
            assert painted <= containing[0].cells


def test_flood_fill_oob_seed():
    with pytest.raises(GridError):
        flood_fill(Grid.filled(3, 3), (5, 5), paint=1)


# -- isometries ----------------------------------------------------------------------


def test_reflect_involution():
    rng = Rng(10, 0)
    for _ in range(40):
        w, h = rng.randint(1, 10), rng.randint(1, 10)
        grid = Grid(rng.randints(0, 9, w * h).reshape(h, w))
        for axis in (("col", rng.randint(0, w - 1)), ("row", rng.randint(0, h - 1))):
            assert reflect(reflect(grid, axis), axis) == grid


def test_rotate90_order_four():
    rng = Rng(11, 0)
    for _ in range(20):
        w, h = rng.randint(1, 10), rng.randint(1, 10)
        grid = Grid(rng.randints(0, 9, w * h).reshape(h, w))
        out = grid
        for _ in range(4):
            out = rotate90(out)
        assert out == grid


def test_rotate90_hand_checked():
    assert rotate90(g([[1, 2], [3, 4]])) == g([[3, 1], [4, 2]])


def test_diff_count_isometry_invariant():
    rng = Rng(12, 0)
    for _ in range(20):
        a = Grid(rng.randints(0, 9, 30).reshape(5, 6))
        b = Grid(rng.randints(0, 9, 30).reshape(5, 6))
        d = diff_count(a, b)
        assert diff_count(rotate90(a), rotate90(b)) == d
        assert diff_count(reflect(a, ("col", 2)), reflect(b, ("col", 2))) == d


# -- scaling ------------------------------------------------------------------------


def test_scale_identity():
    grid = g([[1, 2], [3, 4]])
    assert scale_up(grid, 1) == grid


def test_scale_roundtrip():
    rng = Rng(13, 0)
    for s in (2, 3):
        for _ in range(15):
            w, h = rng.randint(1, 8), rng.randint(1, 8)
            grid = Grid(rng.randints(0, 9, w * h).reshape(h, w))
            assert block_sample(scale_up(grid, s), s) == grid


def test_scale_single_cell():
    assert scale_up(g([[5]]), 3) == Grid.filled(3, 3, 5)


def test_block_sample_errors():
    with pytest.raises(GridError):
        block_sample(g([[1, 2], [3, 4]]), 3)  # not divisible
    with pytest.raises(GridError):
        block_sample(g([[1, 2], [3, 4]]), 2)  # not uniform


def test_scale_up_respects_max_side():
    with pytest.raises(GridError):
        scale_up(Grid.filled(16, 16), 2)


# -- diff ---------------------------------------------------------------------------


def test_diff_count_basics():
    grid = g([[0, 1]])
    assert diff_count(grid, grid) == 0
    assert diff_count(g([[0, 1]]), g([[1, 1]])) == 1


def test_diff_count_symmetry():
    rng = Rng(14, 0)
    a = Grid(rng.randints(0, 9, 20).reshape(4, 5))
    b = Grid(rng.randints(0, 9, 20).reshape(4, 5))
    assert diff_count(a, b) == diff_count(b, a)


def test_diff_count_dim_mismatch():
    with pytest.raises(GridError):
        diff_count(Grid.filled(2, 2), Grid.filled(3, 2))

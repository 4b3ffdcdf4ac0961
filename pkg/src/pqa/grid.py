"""Grid value type and the geometric primitives everything else builds on.

Grids are rectangular arrays of color symbols 0..9 with 0 as the
background, at most 30 cells per side. Grid objects are immutable;
every operation returns a new grid. Coordinates are 0-based (col, row)
while the backing numpy array is indexed [row, col].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import ndimage

MAX_SIDE = 30
NUM_SYMBOLS = 10
BACKGROUND = 0

# connectivity structures for scipy.ndimage.label
STRUCT4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
STRUCT8 = np.ones((3, 3), dtype=bool)


class GridError(ValueError):
    """Raised for malformed grids, bad coordinates or invalid symbols."""


class Coord(NamedTuple):
    col: int
    row: int


@dataclass(frozen=True)
class Component:
    """A maximal connected set of same-colored cells.

    bbox is (min_col, min_row, max_col, max_row), inclusive.
    """

    color: int
    cells: frozenset[Coord]
    bbox: tuple[int, int, int, int]

    @property
    def size(self) -> int:
        return len(self.cells)


class Grid:
    """Immutable rectangular grid of symbols 0..9, up to 30x30."""

    __slots__ = ("_a",)

    def __init__(self, data: np.ndarray | Sequence[Sequence[int]]):
        a = np.asarray(data)
        if a.ndim != 2:
            raise GridError(f"grid must be 2-D, got shape {a.shape}")
        h, w = a.shape
        if not (1 <= w <= MAX_SIDE and 1 <= h <= MAX_SIDE):
            raise GridError(f"grid dimensions {w}x{h} outside 1..{MAX_SIDE}")
        if a.dtype != np.uint8:
            if not np.issubdtype(a.dtype, np.integer):
                raise GridError(f"grid cells must be integers, got dtype {a.dtype}")
            if a.size and (a.min() < 0 or a.max() >= NUM_SYMBOLS):
                raise GridError("grid cells must be symbols in 0..9")
            a = a.astype(np.uint8)
        elif a.size and a.max() >= NUM_SYMBOLS:
            raise GridError("grid cells must be symbols in 0..9")
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        object.__setattr__(self, "_a", a)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Grid":
        """Build from a row-of-rows list, rejecting ragged input."""
        if not rows:
            raise GridError("grid must have at least one row")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise GridError(f"ragged rows: row {i} has length {len(row)}, expected {width}")
        return cls(np.array(rows, dtype=np.int64))

    @classmethod
    def filled(cls, width: int, height: int, symbol: int = BACKGROUND) -> "Grid":
        return cls(np.full((height, width), symbol, dtype=np.uint8))

    @classmethod
    def _wrap(cls, a: np.ndarray) -> "Grid":
        """Wrap a trusted uint8 array without re-validation (internal)."""
        g = object.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.uint8)
        a.setflags(write=False)
        object.__setattr__(g, "_a", a)
        return g

    # -- basic accessors -----------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        """Read-only (height, width) uint8 view of the cells."""
        return self._a

    @property
    def width(self) -> int:
        return self._a.shape[1]

    @property
    def height(self) -> int:
        return self._a.shape[0]

    def to_rows(self) -> list[list[int]]:
        return self._a.tolist()

    def get(self, c: Coord | tuple[int, int]) -> int:
        col, row = c
        self._check_bounds(col, row)
        return int(self._a[row, col])

    def set(self, c: Coord | tuple[int, int], symbol: int) -> "Grid":
        """Return a copy with one cell replaced."""
        col, row = c
        self._check_bounds(col, row)
        if not (0 <= symbol < NUM_SYMBOLS):
            raise GridError(f"symbol {symbol} outside 0..9")
        a = self._a.copy()
        a[row, col] = symbol
        return Grid._wrap(a)

    def _check_bounds(self, col: int, row: int) -> None:
        if not (0 <= col < self.width and 0 <= row < self.height):
            raise GridError(f"coordinate ({col}, {row}) outside {self.width}x{self.height} grid")

    def symbols(self) -> set[int]:
        """Distinct symbols present."""
        return {int(v) for v in np.unique(self._a)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self._a.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"Grid({self.to_rows()!r})"


# -- geometric / topological operations --------------------------------------


def connected_components(
    g: Grid,
    connectivity: int = 8,
    foreground: Callable[[int], bool] | None = None,
) -> list[Component]:
    """Maximal same-colored connected components of the foreground.

    Two cells belong to one component iff they share a color and are
    connected under the given connectivity (4 or 8). The default
    foreground predicate keeps every non-background symbol.
    """
    structure = _structure(connectivity)
    a = g.array
    fg = _foreground_mask(a, foreground)
    out: list[Component] = []
    for color in np.unique(a[fg]) if fg.any() else []:
        mask = fg & (a == color)
        labels, n = ndimage.label(mask, structure=structure)
        for idx in range(1, n + 1):
            rows, cols = np.nonzero(labels == idx)
            cells = frozenset(Coord(int(c), int(r)) for r, c in zip(rows, cols))
            bbox = (int(cols.min()), int(rows.min()), int(cols.max()), int(rows.max()))
            out.append(Component(color=int(color), cells=cells, bbox=bbox))
    return out


def flood_fill(
    g: Grid,
    seed: Coord | tuple[int, int],
    connectivity: int = 4,
    target: Callable[[int], bool] | None = None,
    paint: int = BACKGROUND,
) -> Grid:
    """Repaint the connected target-region containing the seed.

    Cells reachable from the seed through target-satisfying cells take
    the paint symbol; everything else is untouched. A seed that fails
    the target predicate leaves the grid unchanged.
    """
    col, row = seed
    g._check_bounds(col, row)
    if not (0 <= paint < NUM_SYMBOLS):
        raise GridError(f"symbol {paint} outside 0..9")
    a = g.array
    if target is None:
        mask = a == BACKGROUND
    else:
        mask = _foreground_mask(a, target)
    if not mask[row, col]:
        return g
    labels, _ = ndimage.label(mask, structure=_structure(connectivity))
    region = labels == labels[row, col]
    out = a.copy()
    out[region] = paint
    return Grid._wrap(out)


def reflect(g: Grid, axis: tuple[str, int]) -> Grid:
    """Mirror across the cell-line ('col', k) or ('row', k).

    Cells swap with their mirror images within the symmetric band
    centred on the axis; cells whose mirror would fall outside the grid
    stay put, which keeps the operation an involution for any axis.
    """
    kind, k = axis
    a = g.array
    if kind == "col":
        if not (0 <= k < g.width):
            raise GridError(f"axis column {k} outside grid of width {g.width}")
        m = min(k, g.width - 1 - k)
        out = a.copy()
        out[:, k - m : k + m + 1] = a[:, k - m : k + m + 1][:, ::-1]
    elif kind == "row":
        if not (0 <= k < g.height):
            raise GridError(f"axis row {k} outside grid of height {g.height}")
        m = min(k, g.height - 1 - k)
        out = a.copy()
        out[k - m : k + m + 1, :] = a[k - m : k + m + 1, :][::-1, :]
    else:
        raise GridError(f"axis kind must be 'col' or 'row', got {kind!r}")
    return Grid._wrap(out)


def rotate90(g: Grid) -> Grid:
    """Rotate clockwise; output dimensions are swapped."""
    return Grid._wrap(np.rot90(g.array, k=-1))


def scale_up(g: Grid, s: int) -> Grid:
    """Replicate every cell into an s x s block."""
    if s < 1:
        raise GridError(f"scale factor must be >= 1, got {s}")
    if g.width * s > MAX_SIDE or g.height * s > MAX_SIDE:
        raise GridError(f"scaled dimensions exceed {MAX_SIDE}")
    if s == 1:
        return g
    return Grid._wrap(np.repeat(np.repeat(g.array, s, axis=0), s, axis=1))


def block_sample(g: Grid, s: int) -> Grid:
    """Inverse of scale_up: collapse uniform s x s blocks to single cells."""
    if s < 1:
        raise GridError(f"scale factor must be >= 1, got {s}")
    if s == 1:
        return g
    h, w = g.height, g.width
    if h % s or w % s:
        raise GridError(f"dimensions {w}x{h} not divisible by {s}")
    blocks = g.array.reshape(h // s, s, w // s, s)
    first = blocks[:, 0, :, 0]
    if not (blocks == first[:, None, :, None]).all():
        raise GridError(f"grid is not uniform in {s}x{s} blocks")
    return Grid._wrap(first)


def diff_count(a: Grid, b: Grid) -> int:
    """Number of cells where the two grids differ; dimensions must match."""
    if a.array.shape != b.array.shape:
        raise GridError(f"dimension mismatch: {a.width}x{a.height} vs {b.width}x{b.height}")
    return int(np.count_nonzero(a.array != b.array))


# -- internals ---------------------------------------------------------------


def _structure(connectivity: int) -> np.ndarray:
    if connectivity == 4:
        return STRUCT4
    if connectivity == 8:
        return STRUCT8
    raise GridError(f"connectivity must be 4 or 8, got {connectivity}")


def _foreground_mask(a: np.ndarray, predicate: Callable[[int], bool] | None) -> np.ndarray:
    if predicate is None:
        return a != BACKGROUND
    lut = np.fromiter((predicate(s) for s in range(NUM_SYMBOLS)), dtype=bool, count=NUM_SYMBOLS)
    return lut[a]


def label_foreground(a: np.ndarray, connectivity: int = 8) -> tuple[np.ndarray, int]:
    """Label all non-background cells ignoring color (array-level helper)."""
    return ndimage.label(a != BACKGROUND, structure=_structure(connectivity))


def border_reachable_background(a: np.ndarray) -> np.ndarray:
    """Mask of background cells 4-reachable from the grid border.

    The complement within the background is the enclosed interior used
    by the closure rules; 4-connectivity here pairs with 8-connected
    boundaries so closed shapes are leak-proof.
    """
    bg = a == BACKGROUND
    labels, n = ndimage.label(bg, structure=STRUCT4)
    if n == 0:
        return np.zeros_like(bg)
    edge = np.concatenate([labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]])
    edge_ids = np.unique(edge[edge > 0])
    if edge_ids.size == 0:
        return np.zeros_like(bg)
    return np.isin(labels, edge_ids)

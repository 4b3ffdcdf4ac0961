"""Seeded procedural generators for the seven Gestalt tasks.

Generation is answer-first: synthesize an answer grid obeying one law,
derive the question by deletion or alteration, then verify by solving
the question and demanding the exact answer back, with resampling on
failure. Every emitted pair is additionally checked to be solved by
exactly one of the seven laws, so context pairs always identify their
task unambiguously.

All geometry knobs live in GenParams; the defaults are tuned so that
large samples reproduce the reference corpus statistics (see
dataset_io.compute_stats and the acceptance suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict, replace
from typing import Callable

import numpy as np

from .grid import BACKGROUND, MAX_SIDE, Coord, Grid, border_reachable_background
from .oracle import _matching_tasks, _rotation_orbits, infer_task
from .rng import Rng
from .tasks import Episode, Pair, TaskId

_EPISODE_STREAM = 0x45504953  # draws for episode shuffling never collide with pair streams

_NEIGHBORS8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


class GenerationError(RuntimeError):
    """Rejection budget exhausted; the parameter set is over-constrained."""

    def __init__(self, task: TaskId, attempts: int, index: int | None = None):
        self.task = task
        self.attempts = attempts
        self.index = index
        at = f" at pair index {index}" if index is not None else ""
        super().__init__(f"{task.value}: no valid pair within {attempts} attempts{at}")


@dataclass(frozen=True)
class GenParams:
    """Geometry knobs for the generators.

    Fractions are relative to the grid area (or a side length where
    noted). Tuned values are committed; see tests/test_acceptance.py
    for the statistics they were fitted against.
    """

    min_dim: int = 8
    max_dim: int = 30
    max_attempts: int = 64

    # t1: blob growth iterations as a fraction of area
    t1_growth_lo: float = 0.52
    t1_growth_hi: float = 1.18

    # t2: axis-aligned segments, all one color
    t2_segments: tuple[int, int] = (1, 4)
    t2_len_lo: float = 0.30  # of the segment's axis length
    t2_len_hi: float = 0.75

    # t3: one shape plus scattered singletons
    t3_scatter: tuple[int, int] = (2, 4)
    t3_shape_lo: float = 0.012  # of area
    t3_shape_hi: float = 0.042
    t3_min_margin: float = 0.5  # required gap between the two nearest distances

    # t4: rectangles degraded to irregular subsets
    t4_rects: tuple[int, int] = (1, 3)
    t4_side_lo: float = 0.30  # of the corresponding grid side
    t4_side_hi: float = 0.62
    t4_keep_lo: float = 0.38
    t4_keep_hi: float = 0.64

    # t5: (target_scale, reference_scale) cases and their weights
    t5_cases: tuple[tuple[int, int], ...] = ((1, 1), (2, 1), (3, 1), (1, 2), (1, 3))
    t5_weights: tuple[float, ...] = (0.16, 0.36, 0.28, 0.12, 0.08)
    t5_target_lo: float = 0.12  # target cells as a fraction of area
    t5_target_hi: float = 0.26

    # t6: mirrored content density per side
    t6_density_lo: float = 0.068
    t6_density_hi: float = 0.142

    # t7: rectangular holes in a 4-fold symmetric tiling
    t7_holes: tuple[int, int] = (1, 3)
    t7_hole_lo: float = 0.088
    t7_hole_hi: float = 0.195

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "GenParams":
        base = cls()
        kwargs = {}
        for k, v in data.items():
            if not hasattr(base, k):
                raise ValueError(f"unknown generation parameter {k!r}")
            current = getattr(base, k)
            if isinstance(current, tuple):
                v = tuple(tuple(x) if isinstance(x, list) else x for x in v)
            kwargs[k] = v
        return replace(base, **kwargs)


DEFAULT_PARAMS = GenParams()


# -- growth primitives ---------------------------------------------------------


def grow_blob(rng: Rng, canvas: Grid, color: int, k: int) -> set[Coord]:
    """Grow an 8-connected blob for k iterations on background cells.

    Each iteration picks a random cell of the current set and a random
    8-neighbor; in-bounds background neighbors join the set. Growth
    clamps at the borders and at occupied canvas cells.
    """
    a = canvas.array
    free_rows, free_cols = np.nonzero(a == BACKGROUND)
    if free_rows.size == 0:
        raise ValueError("canvas has no room for a seed cell")
    i = rng.randint(0, free_rows.size - 1)
    cells = _grow_iterations(rng, a.shape[0], a.shape[1], (int(free_rows[i]), int(free_cols[i])), k, a)
    return {Coord(c, r) for r, c in cells}


def _grow_iterations(
    rng: Rng, h: int, w: int, seed: tuple[int, int], k: int, blocked: np.ndarray | None = None
) -> list[tuple[int, int]]:
    cells = [seed]
    have = {seed}
    if k <= 0:
        return cells
    member = rng.floats(k)
    dirs = rng.randints(0, 7, k)
    for t in range(k):
        r, c = cells[int(member[t] * len(cells))]
        dr, dc = _NEIGHBORS8[dirs[t]]
        nr, nc = r + dr, c + dc
        if 0 <= nr < h and 0 <= nc < w and (nr, nc) not in have:
            if blocked is not None and blocked[nr, nc] != BACKGROUND:
                continue
            have.add((nr, nc))
            cells.append((nr, nc))
    return cells


def _grow_sized(rng: Rng, h: int, w: int, seed: tuple[int, int], size: int) -> list[tuple[int, int]] | None:
    """Grow a connected blob to exactly `size` cells; None if boxed in.

    Growth picks uniformly from the free cells adjacent to the blob
    (weighted by how many blob cells touch them), which keeps blobs
    compact without wasted draws.
    """
    size = min(size, h * w)
    cells = [seed]
    have = {seed}
    cand: list[tuple[int, int]] = []
    for dr, dc in _NEIGHBORS8:
        nr, nc = seed[0] + dr, seed[1] + dc
        if 0 <= nr < h and 0 <= nc < w:
            cand.append((nr, nc))
    buf = rng.floats(32)
    bi = 0
    while len(cells) < size:
        cell = None
        while cand:
            if bi == len(buf):
                buf = rng.floats(64)
                bi = 0
            i = int(buf[bi] * len(cand))
            bi += 1
            cand[i], cand[-1] = cand[-1], cand[i]
            picked = cand.pop()
            if picked not in have:
                cell = picked
                break
        if cell is None:
            return None
        have.add(cell)
        cells.append(cell)
        for dr, dc in _NEIGHBORS8:
            nr, nc = cell[0] + dr, cell[1] + dc
            if 0 <= nr < h and 0 <= nc < w and (nr, nc) not in have:
                cand.append((nr, nc))
    return cells


def _fill_holes(mask: np.ndarray) -> np.ndarray:
    """Add enclosed background pockets to a boolean shape mask."""
    tmp = mask.astype(np.uint8)
    reach = border_reachable_background(tmp)
    return mask | (~mask & ~reach)


def _dims(rng: Rng, params: GenParams) -> tuple[int, int]:
    return rng.randint(params.min_dim, params.max_dim), rng.randint(params.min_dim, params.max_dim)


def _interior_mask(shape_mask: np.ndarray) -> np.ndarray:
    """Cells of a solid mask with no 4-neighbor outside it (grid border counts)."""
    padded = np.pad(shape_mask, 1, constant_values=False)
    inside = (
        padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    )
    return shape_mask & inside


# -- per-task answer/question synthesis ----------------------------------------
# Each builder returns (question, answer) uint8 arrays, or None when a
# placement constraint failed and the pair should be resampled.


def _build_t1(rng: Rng, params: GenParams) -> tuple[np.ndarray, np.ndarray] | None:
    h, w = _dims(rng, params)
    area = h * w
    color = rng.randint(1, 9)
    k = rng.randint(int(params.t1_growth_lo * area), int(params.t1_growth_hi * area))
    seed = (rng.randint(0, h - 1), rng.randint(0, w - 1))
    cells = _grow_iterations(rng, h, w, seed, k)
    mask = np.zeros((h, w), dtype=bool)
    rows, cols = zip(*cells)
    mask[list(rows), list(cols)] = True
    mask = _fill_holes(mask)
    interior = _interior_mask(mask)
    if not interior.any():
        return None
    answer = np.zeros((h, w), dtype=np.uint8)
    answer[mask] = color
    question = answer.copy()
    question[interior] = BACKGROUND
    return question, answer


def _build_t2(rng: Rng, params: GenParams) -> tuple[np.ndarray, np.ndarray] | None:
    h, w = _dims(rng, params)
    color = rng.randint(1, 9)
    n_seg = rng.randint(*params.t2_segments)
    # segments keep pairwise disjoint row and column spans so that no
    # two cells from different segments ever align with a clear gap
    row_spans: list[tuple[int, int]] = []
    col_spans: list[tuple[int, int]] = []
    segs: list[tuple[str, int, int, int]] = []  # (orient, fixed, start, length)
    for _ in range(n_seg):
        placed = False
        for _try in range(24):
            horizontal = rng.chance(0.5)
            axis_len = w if horizontal else h
            max_len = max(3, int(params.t2_len_hi * axis_len))
            min_len = min(max(3, int(params.t2_len_lo * axis_len)), max_len)
            length = rng.randint(min_len, max_len)
            if length > axis_len:
                continue
            if horizontal:
                r = rng.randint(0, h - 1)
                c0 = rng.randint(0, w - length)
                rs, cs = (r, r), (c0, c0 + length - 1)
            else:
                c = rng.randint(0, w - 1)
                r0 = rng.randint(0, h - length)
                rs, cs = (r0, r0 + length - 1), (c, c)
            if any(rs[0] <= b and a <= rs[1] for a, b in row_spans):
                continue
            if any(cs[0] <= b and a <= cs[1] for a, b in col_spans):
                continue
            row_spans.append(rs)
            col_spans.append(cs)
            segs.append(("h" if horizontal else "v", r if horizontal else c, cs[0] if horizontal else rs[0], length))
            placed = True
            break
        if not placed:
            break
    if not segs:
        return None
    answer = np.zeros((h, w), dtype=np.uint8)
    question = np.zeros((h, w), dtype=np.uint8)
    for orient, fixed, start, length in segs:
        if orient == "h":
            answer[fixed, start : start + length] = color
            question[fixed, start] = color
            question[fixed, start + length - 1] = color
        else:
            answer[start : start + length, fixed] = color
            question[start, fixed] = color
            question[start + length - 1, fixed] = color
    return question, answer


def _build_t3(rng: Rng, params: GenParams) -> tuple[np.ndarray, np.ndarray] | None:
    h, w = _dims(rng, params)
    area = h * w
    shape_color = rng.randint(1, 9)
    n_scatter = rng.randint(*params.t3_scatter)
    frac = params.t3_shape_lo + rng.random() * (params.t3_shape_hi - params.t3_shape_lo)
    size = max(3, round(frac * area))
    seed = (rng.randint(0, h - 1), rng.randint(0, w - 1))
    cells = _grow_sized(rng, h, w, seed, size)
    if cells is None:
        return None
    mask = np.zeros((h, w), dtype=bool)
    rows, cols = zip(*cells)
    mask[list(rows), list(cols)] = True
    mask = _fill_holes(mask)

    colors = rng.sample([s for s in range(1, 10) if s != shape_color], n_scatter)
    # keep singletons off the shape and apart from each other
    padded = np.pad(mask, 1, constant_values=False)
    near_shape = np.zeros_like(mask)
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            near_shape |= padded[1 + dr : 1 + dr + h, 1 + dc : 1 + dc + w]
    shape_rc = np.nonzero(mask)
    srows = shape_rc[0].astype(np.int64)
    scols = shape_rc[1].astype(np.int64)

    for _try in range(16):
        blocked = near_shape.copy()
        spots: list[tuple[int, int]] = []
        ok = True
        for _ in range(n_scatter):
            free = np.nonzero(~blocked)
            if free[0].size == 0:
                ok = False
                break
            j = rng.randint(0, free[0].size - 1)
            r, c = int(free[0][j]), int(free[1][j])
            spots.append((r, c))
            blocked[max(0, r - 1) : r + 2, max(0, c - 1) : c + 2] = True
        if not ok:
            continue
        d2 = sorted(int(((srows - r) ** 2 + (scols - c) ** 2).min()) for r, c in spots)
        if len(d2) >= 2 and math.sqrt(d2[1]) - math.sqrt(d2[0]) < params.t3_min_margin:
            continue
        question = np.zeros((h, w), dtype=np.uint8)
        question[mask] = shape_color
        for (r, c), col in zip(spots, colors):
            question[r, c] = col
        best = min(range(n_scatter), key=lambda i: int(((srows - spots[i][0]) ** 2 + (scols - spots[i][1]) ** 2).min()))
        answer = np.zeros((h, w), dtype=np.uint8)
        answer[mask] = colors[best]
        return question, answer
    return None


def _degrade_rect(rng: Rng, rh: int, rw: int, keep: int) -> np.ndarray | None:
    """Connected strict subset of an rh x rw box touching all four sides."""
    limit = rh * rw - 1  # strictly smaller than the full box
    keep = min(keep, limit)
    seed = (rng.randint(0, rh - 1), rng.randint(0, rw - 1))
    cells = _grow_sized(rng, rh, rw, seed, keep)
    if cells is None:
        return None
    have = set(cells)
    touched = {
        "top": any(r == 0 for r, _ in cells),
        "bottom": any(r == rh - 1 for r, _ in cells),
        "left": any(c == 0 for _, c in cells),
        "right": any(c == rw - 1 for _, c in cells),
    }
    cand: list[tuple[int, int]] = []
    for r, c in cells:
        for dr, dc in _NEIGHBORS8:
            nr, nc = r + dr, c + dc
            if 0 <= nr < rh and 0 <= nc < rw and (nr, nc) not in have:
                cand.append((nr, nc))
    buf = rng.floats(32)
    bi = 0
    while not all(touched.values()):
        cell = None
        while cand:
            if bi == len(buf):
                buf = rng.floats(64)
                bi = 0
            i = int(buf[bi] * len(cand))
            bi += 1
            cand[i], cand[-1] = cand[-1], cand[i]
            picked = cand.pop()
            if picked not in have:
                cell = picked
                break
        if cell is None or len(have) >= limit:
            return None
        have.add(cell)
        r, c = cell
        touched["top"] |= r == 0
        touched["bottom"] |= r == rh - 1
        touched["left"] |= c == 0
        touched["right"] |= c == rw - 1
        for dr, dc in _NEIGHBORS8:
            nr, nc = r + dr, c + dc
            if 0 <= nr < rh and 0 <= nc < rw and (nr, nc) not in have:
                cand.append((nr, nc))
    mask = np.zeros((rh, rw), dtype=bool)
    rows, cols = zip(*have)
    mask[list(rows), list(cols)] = True
    return mask


def _build_t4(rng: Rng, params: GenParams) -> tuple[np.ndarray, np.ndarray] | None:
    h, w = _dims(rng, params)
    color = rng.randint(1, 9)
    n_rect = rng.randint(*params.t4_rects)
    boxes: list[tuple[int, int, int, int]] = []  # r0, c0, rh, rw
    for _ in range(n_rect):
        for _try in range(24):
            rh = rng.randint(max(2, int(params.t4_side_lo * h)), max(2, int(params.t4_side_hi * h)))
            rw = rng.randint(max(2, int(params.t4_side_lo * w)), max(2, int(params.t4_side_hi * w)))
            rh, rw = min(rh, h), min(rw, w)
            r0 = rng.randint(0, h - rh)
            c0 = rng.randint(0, w - rw)
            # bounding boxes disjoint and non-adjacent (1-cell moat)
            if all(
                r0 > br + bh or br > r0 + rh or c0 > bc + bw or bc > c0 + rw
                for br, bc, bh, bw in boxes
            ):
                boxes.append((r0, c0, rh, rw))
                break
    if not boxes:
        return None
    answer = np.zeros((h, w), dtype=np.uint8)
    question = np.zeros((h, w), dtype=np.uint8)
    for r0, c0, rh, rw in boxes:
        answer[r0 : r0 + rh, c0 : c0 + rw] = color
        keep_frac = params.t4_keep_lo + rng.random() * (params.t4_keep_hi - params.t4_keep_lo)
        keep = max(2, round(keep_frac * rh * rw))
        sub = _degrade_rect(rng, rh, rw, keep)
        if sub is None:
            return None
        question[r0 : r0 + rh, c0 : c0 + rw][sub] = color
    return question, answer


def _upscale(a: np.ndarray, s: int) -> np.ndarray:
    return np.repeat(np.repeat(a, s, axis=0), s, axis=1) if s > 1 else a


def _place_shapes(rng: Rng, h: int, w: int, sizes: list[tuple[int, int]]) -> list[tuple[int, int]] | None:
    """Top-left corners so the boxes fit with a 1-cell moat between them."""
    placed: list[tuple[int, int]] = []
    for i, (sh, sw) in enumerate(sizes):
        if sh > h or sw > w:
            return None
        for _try in range(40):
            r0 = rng.randint(0, h - sh)
            c0 = rng.randint(0, w - sw)
            if all(
                r0 > pr + ph or pr > r0 + sh or c0 > pc + pw or pc > c0 + sw
                for (pr, pc), (ph, pw) in zip(placed, sizes[:i])
            ):
                placed.append((r0, c0))
                break
        else:
            return None
    return placed


def _mask_matches_scaled(m1: np.ndarray, m2: np.ndarray) -> bool:
    """True when two bbox-cropped masks are equal up to scale 1, 2 or 3."""
    h1, w1 = m1.shape
    h2, w2 = m2.shape
    if h1 % h2 == 0 and w1 % w2 == 0 and h1 // h2 == w1 // w2 and h1 // h2 in (1, 2, 3):
        return bool(np.array_equal(m1, _upscale(m2, h1 // h2)))
    if h2 % h1 == 0 and w2 % w1 == 0 and h2 // h1 == w2 // w1 and h2 // h1 in (2, 3):
        return bool(np.array_equal(m2, _upscale(m1, h2 // h1)))
    return False


def _random_mask(rng: Rng, max_h: int, max_w: int, size: int) -> np.ndarray | None:
    """A bbox-cropped 8-connected random mask of roughly `size` cells."""
    box = max(2, math.ceil(math.sqrt(size * 1.6)))
    bh, bw = min(box, max_h), min(box, max_w)
    if bh * bw < size:
        size = bh * bw
    cells = _grow_sized(rng, bh, bw, (rng.randint(0, bh - 1), rng.randint(0, bw - 1)), max(2, size))
    if cells is None:
        return None
    m = np.zeros((bh, bw), dtype=bool)
    rows, cols = zip(*cells)
    m[list(rows), list(cols)] = True
    rs, cs = np.nonzero(m)
    return m[rs.min() : rs.max() + 1, cs.min() : cs.max() + 1]


def _paint_pattern(rng: Rng, mask: np.ndarray, colors: tuple[int, int]) -> np.ndarray:
    """Color every mask cell with one of two colors, both guaranteed present."""
    out = np.zeros(mask.shape, dtype=np.uint8)
    rs, cs = np.nonzero(mask)
    bits = rng.randints(0, 1, rs.size)
    picks = np.where(bits == 1, colors[1], colors[0]).astype(np.uint8)
    if (picks == picks[0]).all():
        picks[rng.randint(0, rs.size - 1)] = colors[0] if picks[0] == colors[1] else colors[1]
    out[rs, cs] = picks
    return out


def _build_t5(rng: Rng, params: GenParams) -> tuple[np.ndarray, np.ndarray] | None:
    s_t, s_r = rng.weighted_choice(params.t5_cases, params.t5_weights)
    if s_r > 1:
        # shrunken-target cases need room for the larger reference
        h = rng.randint(max(params.min_dim, params.max_dim - 12), params.max_dim)
        w = rng.randint(max(params.min_dim, params.max_dim - 12), params.max_dim)
    else:
        h, w = _dims(rng, params)
    area = h * w
    frac = params.t5_target_lo + rng.random() * (params.t5_target_hi - params.t5_target_lo)
    base_size = max(2, round(frac * area / (s_t * s_t)))
    # the three bounding boxes must plausibly coexist on the canvas
    cap = int(0.50 * area / (1.7 * (s_t * s_t + 2 * s_r * s_r)))
    base_size = max(2, min(base_size, cap))
    max_base_side = min(MAX_SIDE, min(h, w)) // max(s_t, s_r)
    if max_base_side < 2:
        return None
    base = _random_mask(rng, max_base_side, max_base_side, base_size)
    if base is None:
        return None
    bh, bw = base.shape
    if bh * s_t > h or bw * s_t > w or bh * s_r > h or bw * s_r > w:
        return None

    target_color = rng.randint(1, 9)
    pool = rng.sample([s for s in range(1, 10) if s != target_color], 3)
    ref_colors = (pool[0], pool[1])
    decoy_colors = (pool[0], pool[2]) if rng.chance(0.5) else (pool[1], pool[2])

    base_pattern = _paint_pattern(rng, base, ref_colors)
    target_mask = _upscale(base, s_t)
    ref_mask = _upscale(base, s_r)
    ref_patch = _upscale(base_pattern, s_r)
    target_patch = _upscale(base_pattern, s_t)

    decoy = None
    for _try in range(16):
        cand = _random_mask(rng, min(h, w), min(h, w), max(2, base_size * s_r * s_r))
        if cand is None:
            continue
        if not _mask_matches_scaled(target_mask, cand):
            decoy = cand
            break
    if decoy is None:
        return None
    decoy_patch = _paint_pattern(rng, decoy, decoy_colors)

    sizes = [target_mask.shape, ref_mask.shape, decoy.shape]
    spots = _place_shapes(rng, h, w, sizes)
    if spots is None:
        return None
    question = np.zeros((h, w), dtype=np.uint8)
    (tr, tc), (rr, rc), (dr, dc) = spots
    question[tr : tr + target_mask.shape[0], tc : tc + target_mask.shape[1]][target_mask] = target_color
    question[rr : rr + ref_mask.shape[0], rc : rc + ref_mask.shape[1]][ref_mask] = ref_patch[ref_mask]
    question[dr : dr + decoy.shape[0], dc : dc + decoy.shape[1]][decoy] = decoy_patch[decoy]
    answer = question.copy()
    answer[tr : tr + target_mask.shape[0], tc : tc + target_mask.shape[1]][target_mask] = target_patch[target_mask]
    return question, answer


def _build_t6(rng: Rng, params: GenParams) -> tuple[np.ndarray, np.ndarray] | None:
    h, w = _dims(rng, params)
    area = h * w
    vertical_axis = rng.chance(0.5)  # axis occupies one full column
    span = w if vertical_axis else h
    if span < 5:
        return None
    k = rng.randint(2, span - 3)
    m = min(k, span - 1 - k)
    if m < 1:
        return None
    axis_color = rng.randint(1, 9)
    content_color = rng.choice([s for s in range(1, 10) if s != axis_color])
    density = params.t6_density_lo + rng.random() * (params.t6_density_hi - params.t6_density_lo)
    band_cells = m * (h if vertical_axis else w)
    n = min(max(1, round(density * area)), max(1, int(0.7 * band_cells)))

    answer = np.zeros((h, w), dtype=np.uint8)
    if vertical_axis:
        answer[:, k] = axis_color
        draws = list(zip(rng.randints(0, h - 1, n * 2).tolist(), rng.randints(k - m, k - 1, n * 2).tolist()))
    else:
        answer[k, :] = axis_color
        draws = list(zip(rng.randints(k - m, k - 1, n * 2).tolist(), rng.randints(0, w - 1, n * 2).tolist()))
    spots: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for spot in draws:
        if spot not in seen:
            seen.add(spot)
            spots.append(spot)
        if len(spots) == n:
            break
    for r, c in spots:
        answer[r, c] = content_color
    if vertical_axis:
        mirrored = answer[:, k - m : k].copy()[:, ::-1]
        answer[:, k + 1 : k + m + 1] = mirrored
    else:
        mirrored = answer[k - m : k, :].copy()[::-1, :]
        answer[k + 1 : k + m + 1, :] = mirrored
    question = answer.copy()
    clear_low = rng.chance(0.5)
    if vertical_axis:
        if clear_low:
            question[:, :k] = BACKGROUND
        else:
            question[:, k + 1 :] = BACKGROUND
    else:
        if clear_low:
            question[:k, :] = BACKGROUND
        else:
            question[k + 1 :, :] = BACKGROUND
    return question, answer


def _build_t7(rng: Rng, params: GenParams) -> tuple[np.ndarray, np.ndarray] | None:
    n = rng.randint(params.min_dim, params.max_dim)
    palette = rng.sample(list(range(1, 10)), 4)
    orbits, center = _rotation_orbits(n)
    answer = np.zeros(n * n, dtype=np.uint8)
    pal = np.array(palette, dtype=np.uint8)
    reps = pal[rng.randints(0, 3, orbits.shape[0])]
    answer[orbits] = reps[:, None]
    if center >= 0:
        answer[center] = palette[rng.randint(0, 3)]
    answer = answer.reshape(n, n)

    frac = params.t7_hole_lo + rng.random() * (params.t7_hole_hi - params.t7_hole_lo)
    budget = max(1, round(frac * n * n))
    n_holes = rng.randint(*params.t7_holes)
    for _try in range(16):
        hole = np.zeros((n, n), dtype=bool)
        for _ in range(n_holes):
            target = max(1, budget // n_holes)
            hh = rng.randint(1, max(1, min(n - 1, round(math.sqrt(target * 2)))))
            hw = max(1, min(n - 1, round(target / hh)))
            r0 = rng.randint(0, n - hh)
            c0 = rng.randint(0, n - hw)
            hole[r0 : r0 + hh, c0 : c0 + hw] = True
        if center >= 0 and hole.ravel()[center]:
            continue
        if orbits.size and (hole.ravel()[orbits].sum(axis=1) >= 4).any():
            continue  # an orbit fully inside the holes is unrecoverable
        question = answer.copy()
        question[hole] = BACKGROUND
        present = np.unique(question)
        if all(p in present for p in palette):
            return question, answer
    return None


_BUILDERS: dict[TaskId, Callable[[Rng, GenParams], tuple[np.ndarray, np.ndarray] | None]] = {
    TaskId.CLOSURE_FILLING: _build_t1,
    TaskId.CONTINUITY_CONNECTION: _build_t2,
    TaskId.PROXIMITY_IDENTIFICATION: _build_t3,
    TaskId.SHAPE_RECONSTRUCTION: _build_t4,
    TaskId.SHAPE_PATTERN_MATCHING: _build_t5,
    TaskId.REFLECTION_COMPLETION: _build_t6,
    TaskId.ROTATION_COMPLETION: _build_t7,
}


# -- public generation API ------------------------------------------------------


def generate_pair(task: TaskId, rng: Rng, params: GenParams = DEFAULT_PARAMS) -> Pair:
    """One verified question/answer pair for the task.

    A candidate is accepted only when exactly one of the seven solvers
    maps its question onto its answer, and that solver is the task's
    own; everything else is resampled from the same stream, up to
    params.max_attempts.
    """
    builder = _BUILDERS[task]
    for _ in range(params.max_attempts):
        built = builder(rng, params)
        if built is None:
            continue
        question, answer = built
        matches = _matching_tasks(question, answer)
        if len(matches) == 1 and matches[0] is task:
            return Pair(Grid._wrap(question), Grid._wrap(answer), task)
    raise GenerationError(task, params.max_attempts)


def generate_dataset(
    task: TaskId,
    count: int,
    seed: int,
    params: GenParams = DEFAULT_PARAMS,
    jobs: int = 1,
) -> list[Pair]:
    """count pairs, pair i drawn from stream i of the seed.

    Per-index streams make the output independent of generation order,
    so any jobs level produces the identical list.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if jobs <= 1:
        return [_indexed_pair((task, seed, params, i)) for i in range(count)]
    import multiprocessing as mp

    args = [(task, seed, params, i) for i in range(count)]
    chunk = max(1, count // (jobs * 8))
    with mp.get_context("fork").Pool(jobs) as pool:
        return pool.map(_indexed_pair, args, chunksize=chunk)


def _indexed_pair(arg: tuple[TaskId, int, GenParams, int]) -> Pair:
    task, seed, params, index = arg
    try:
        return generate_pair(task, Rng(seed, index), params)
    except GenerationError as e:
        raise GenerationError(task, params.max_attempts, index) from e


def make_episodes(pairs: list[Pair], seed: int) -> list[Episode]:
    """Shuffle, split in half, and zip context pairs with test pairs.

    Every pair is used at most once. A context that does not identify
    its task uniquely is rejected at build time (never happens for
    pairs from generate_dataset, which pre-verifies uniqueness).
    """
    if len(pairs) < 2:
        raise ValueError("need at least 2 pairs to build an episode")
    tasks = {p.task for p in pairs}
    if len(tasks) != 1:
        raise ValueError("all pairs must come from the same task")
    task = tasks.pop()
    shuffled = Rng(seed, _EPISODE_STREAM).shuffle(pairs)
    half = len(shuffled) // 2
    episodes: list[Episode] = []
    for ctx, test in zip(shuffled[:half], shuffled[half : 2 * half]):
        result = infer_task(ctx.question, ctx.answer)
        if not result.ok or (task is not None and result.task is not task):
            continue
        eid = f"{(task or result.task).value}-{len(episodes):05d}"
        episodes.append(
            Episode(context=ctx, test_question=test.question, test_answer=test.answer, task=task, episode_id=eid)
        )
    return episodes

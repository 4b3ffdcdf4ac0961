"""Rule-based solvers, one per Gestalt law, plus context-driven task inference.

Each solver is a total function: on grids that are not an instance of
its law it returns a structured rejection instead of guessing, which is
what makes task inference a clean seven-way filter. All solvers
preserve grid dimensions and never mutate their input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .grid import (
    BACKGROUND,
    STRUCT4,
    Grid,
    border_reachable_background,
    label_foreground,
)
from .tasks import ALL_TASKS, Episode, TaskId

NOT_AN_INSTANCE = "not-an-instance"
AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class SolveOutcome:
    """A solved answer grid, or a structured rejection."""

    answer: Grid | None
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.answer is not None


@dataclass(frozen=True)
class InferResult:
    """Outcome of identifying the law behind a context pair."""

    task: TaskId | None
    matches: tuple[TaskId, ...]
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.task is not None


class ContextRejected(Exception):
    """Context pair does not identify a unique law."""

    def __init__(self, result: InferResult):
        self.result = result
        super().__init__(f"context inference failed: {result.reason} (matches={[t.value for t in result.matches]})")


# -- array-level solvers ------------------------------------------------------
# Internal functions take and return uint8 arrays; (array, None) on
# success, (None, reason) on rejection.


def _t1_closure(a: np.ndarray) -> tuple[np.ndarray | None, str | None]:
    reach = border_reachable_background(a)
    enclosed = (a == BACKGROUND) & ~reach
    if not enclosed.any():
        return a, None
    out = a.copy()
    labels, n = ndimage.label(enclosed, structure=STRUCT4)
    for idx in range(1, n + 1):
        region = labels == idx
        ring = ndimage.binary_dilation(region, structure=STRUCT4) & ~region
        colors = np.unique(a[ring])
        # a region wrapped by mixed colors has no single surrounding
        # symbol to take; leave it untouched
        if colors.size == 1 and colors[0] != BACKGROUND:
            out[region] = colors[0]
    return out, None


def _t2_continuity(a: np.ndarray) -> tuple[np.ndarray | None, str | None]:
    out = a.copy()
    changed = True
    while changed:
        changed = False
        for arr in (out, out.T):  # rows, then columns via the transposed view
            rs, cs = np.nonzero(arr)
            if rs.size < 2:
                continue
            vals = arr[rs, cs]
            hits = np.nonzero((rs[1:] == rs[:-1]) & (cs[1:] - cs[:-1] >= 2) & (vals[1:] == vals[:-1]))[0]
            for i in hits:
                arr[rs[i], cs[i] + 1 : cs[i + 1]] = vals[i]
                changed = True
    return out, None


_STRUCT8_INT = np.ones((3, 3), dtype=bool)


def _present_colors(a: np.ndarray) -> np.ndarray:
    fg = a != BACKGROUND
    return np.unique(a[fg]) if fg.any() else np.empty(0, dtype=a.dtype)


def _t3_proximity(a: np.ndarray) -> tuple[np.ndarray | None, str | None]:
    multi: list[tuple[int, tuple[slice, slice], np.ndarray]] = []  # color, bbox slices, mask crop
    singles: list[tuple[int, int, int]] = []  # color, row, col
    for color in _present_colors(a):
        labels, n = ndimage.label(a == color, structure=_STRUCT8_INT)
        counts = np.bincount(labels.ravel())
        objs = ndimage.find_objects(labels)
        for idx in range(1, n + 1):
            sl = objs[idx - 1]
            if counts[idx] == 1:
                singles.append((int(color), sl[0].start, sl[1].start))
            else:
                multi.append((int(color), sl, labels[sl] == idx))
        if len(multi) > 1:
            return None, NOT_AN_INSTANCE
    if len(multi) != 1 or not singles:
        return None, NOT_AN_INSTANCE
    _, s_sl, s_mask = multi[0]
    rows_s, cols_s = np.nonzero(s_mask)
    rows_s = rows_s + s_sl[0].start
    cols_s = cols_s + s_sl[1].start
    # squared distances are exact integers, so ties are exact
    d2 = [int(((rows_s - r) ** 2 + (cols_s - c) ** 2).min()) for _, r, c in singles]
    order = sorted(range(len(singles)), key=d2.__getitem__)
    if len(singles) > 1 and d2[order[0]] == d2[order[1]]:
        return None, AMBIGUOUS
    nearest_color = singles[order[0]][0]
    out = a.copy()
    out[rows_s, cols_s] = nearest_color
    for _, r, c in singles:
        out[r, c] = BACKGROUND
    return out, None


def _t4_rectangles(a: np.ndarray) -> tuple[np.ndarray | None, str | None]:
    boxes: list[tuple[int, int, int, int, int]] = []
    for color in _present_colors(a):
        labels, n = ndimage.label(a == color, structure=_STRUCT8_INT)
        for sl in ndimage.find_objects(labels):
            boxes.append((sl[0].start, sl[0].stop - 1, sl[1].start, sl[1].stop - 1, int(color)))
    if not boxes:
        return a, None
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            r0, r1, c0, c1 = boxes[i][:4]
            s0, s1, d0, d1 = boxes[j][:4]
            if r0 <= s1 and s0 <= r1 and c0 <= d1 and d0 <= c1:
                return None, NOT_AN_INSTANCE
    out = a.copy()
    for r0, r1, c0, c1, color in boxes:
        out[r0 : r1 + 1, c0 : c1 + 1] = color
    return out, None


def _upscale(a: np.ndarray, s: int) -> np.ndarray:
    return np.repeat(np.repeat(a, s, axis=0), s, axis=1)


def _t5_pattern(a: np.ndarray) -> tuple[np.ndarray | None, str | None]:
    labels, n = label_foreground(a, 8)
    if n != 3:
        return None, NOT_AN_INSTANCE
    shapes = []
    objs = ndimage.find_objects(labels)
    for idx in range(1, n + 1):
        sl = objs[idx - 1]
        mask = labels[sl] == idx
        colors = np.unique(a[sl][mask])
        shapes.append((sl, mask, colors))
    target_idx = []
    for i, (sl, mask, colors) in enumerate(shapes):
        if colors.size != 1:
            continue
        color = int(colors[0])
        if int(np.count_nonzero(a == color)) == int(mask.sum()):
            target_idx.append(i)
    if len(target_idx) != 1:
        return None, NOT_AN_INSTANCE
    ti = target_idx[0]
    refs = [shapes[i] for i in range(3) if i != ti]
    if any(colors.size < 2 for _, _, colors in refs):
        return None, NOT_AN_INSTANCE

    t_sl, t_mask, _ = shapes[ti]
    th, tw = t_mask.shape
    matches = []
    for sl, mask, _ in refs:
        rh, rw = mask.shape
        if rh == 0 or rw == 0:
            continue
        if th % rh == 0 and tw % rw == 0 and th // rh == tw // rw and th // rh in (1, 2, 3):
            f = th // rh
            if np.array_equal(t_mask, _upscale(mask, f)):
                matches.append((sl, mask, f, "up"))
        elif rh % th == 0 and rw % tw == 0 and rh // th == rw // tw and rh // th in (2, 3):
            f = rh // th
            if np.array_equal(mask, _upscale(t_mask, f)):
                matches.append((sl, mask, f, "down"))
    if len(matches) > 1:
        return None, AMBIGUOUS
    if not matches:
        return None, NOT_AN_INSTANCE

    sl, mask, f, direction = matches[0]
    ref_patch = np.where(mask, a[sl], 0).astype(np.uint8)
    if direction == "up":
        pattern = _upscale(ref_patch, f) if f > 1 else ref_patch
    else:
        blocks = ref_patch.reshape(mask.shape[0] // f, f, mask.shape[1] // f, f)
        first = blocks[:, 0, :, 0]
        if not (blocks == first[:, None, :, None]).all():
            return None, NOT_AN_INSTANCE
        pattern = first
    out = a.copy()
    region = out[t_sl]
    region[t_mask] = pattern[t_mask]
    return out, None


def _t6_reflection(a: np.ndarray) -> tuple[np.ndarray | None, str | None]:
    h, w = a.shape
    row_axes = [r for r in range(h) if a[r, 0] != BACKGROUND and (a[r] == a[r, 0]).all()]
    col_axes = [c for c in range(w) if a[0, c] != BACKGROUND and (a[:, c] == a[0, c]).all()]
    if len(row_axes) + len(col_axes) != 1:
        return None, NOT_AN_INSTANCE
    out = a.copy()
    if row_axes:
        k = row_axes[0]
        m = min(k, h - 1 - k)
        if (a[: k - m] != BACKGROUND).any() or (a[k + m + 1 :] != BACKGROUND).any():
            return None, NOT_AN_INSTANCE  # content with no in-bounds mirror
        band = out[k - m : k + m + 1]
    else:
        k = col_axes[0]
        m = min(k, w - 1 - k)
        if (a[:, : k - m] != BACKGROUND).any() or (a[:, k + m + 1 :] != BACKGROUND).any():
            return None, NOT_AN_INSTANCE
        band = out[:, k - m : k + m + 1]
    flipped = band[::-1] if row_axes else band[:, ::-1]
    conflict = (band != BACKGROUND) & (flipped != BACKGROUND) & (band != flipped)
    if conflict.any():
        return None, NOT_AN_INSTANCE
    band[...] = np.where(band != BACKGROUND, band, flipped)
    return out, None


_ORBIT_CACHE: dict[int, tuple[np.ndarray, int]] = {}


def _rotation_orbits(n: int) -> tuple[np.ndarray, int]:
    """Flat indices of the 90-degree rotation orbits of an n x n grid.

    Returns (orbits, center) where orbits has shape (m, 4) and center is
    the fixed-point flat index for odd n, else -1.
    """
    cached = _ORBIT_CACHE.get(n)
    if cached is not None:
        return cached
    seen = np.zeros((n, n), dtype=bool)
    rows = []
    center = -1
    for i in range(n):
        for j in range(n):
            if seen[i, j]:
                continue
            orbit = [(i, j)]
            r, c = i, j
            for _ in range(3):
                r, c = c, n - 1 - r
                orbit.append((r, c))
            if orbit[1] == orbit[0]:
                center = i * n + j
                seen[i, j] = True
                continue
            for r, c in orbit:
                seen[r, c] = True
            rows.append([r * n + c for r, c in orbit])
    result = (np.array(rows, dtype=np.intp), center)
    _ORBIT_CACHE[n] = result
    return result


def _t7_rotation(a: np.ndarray) -> tuple[np.ndarray | None, str | None]:
    h, w = a.shape
    if h != w:
        return None, NOT_AN_INSTANCE
    orbits, center = _rotation_orbits(h)
    flat = a.ravel()
    if center >= 0 and flat[center] == BACKGROUND:
        return None, AMBIGUOUS  # the fixed point has no orbit mates to copy
    if orbits.size == 0:
        return a, None
    vals = flat[orbits]
    nonzero_max = vals.max(axis=1)
    if (nonzero_max == BACKGROUND).any():
        return None, AMBIGUOUS
    masked_min = np.where(vals == BACKGROUND, 255, vals).min(axis=1)
    if (masked_min != nonzero_max).any():
        return None, NOT_AN_INSTANCE  # orbit mates disagree outside the holes
    out = flat.copy()
    out[orbits] = nonzero_max[:, None]
    return out.reshape(a.shape), None


_ARRAY_SOLVERS = {
    TaskId.CLOSURE_FILLING: _t1_closure,
    TaskId.CONTINUITY_CONNECTION: _t2_continuity,
    TaskId.PROXIMITY_IDENTIFICATION: _t3_proximity,
    TaskId.SHAPE_RECONSTRUCTION: _t4_rectangles,
    TaskId.SHAPE_PATTERN_MATCHING: _t5_pattern,
    TaskId.REFLECTION_COMPLETION: _t6_reflection,
    TaskId.ROTATION_COMPLETION: _t7_rotation,
}


def _solve_array(task: TaskId, a: np.ndarray) -> tuple[np.ndarray | None, str | None]:
    return _ARRAY_SOLVERS[task](a)


def _matching_tasks(question: np.ndarray, answer: np.ndarray) -> list[TaskId]:
    """Tasks whose solver maps the question exactly onto the answer."""
    found = []
    for task in ALL_TASKS:
        out, _ = _ARRAY_SOLVERS[task](question)
        if out is not None and np.array_equal(out, answer):
            found.append(task)
    return found


# -- public API ---------------------------------------------------------------


def _wrap(fn):
    def solve(q: Grid) -> SolveOutcome:
        out, reason = fn(q.array)
        if out is None:
            return SolveOutcome(None, reason)
        return SolveOutcome(Grid._wrap(out))

    return solve


solve_t1 = _wrap(_t1_closure)
solve_t2 = _wrap(_t2_continuity)
solve_t3 = _wrap(_t3_proximity)
solve_t4 = _wrap(_t4_rectangles)
solve_t5 = _wrap(_t5_pattern)
solve_t6 = _wrap(_t6_reflection)
solve_t7 = _wrap(_t7_rotation)

SOLVERS = {
    TaskId.CLOSURE_FILLING: solve_t1,
    TaskId.CONTINUITY_CONNECTION: solve_t2,
    TaskId.PROXIMITY_IDENTIFICATION: solve_t3,
    TaskId.SHAPE_RECONSTRUCTION: solve_t4,
    TaskId.SHAPE_PATTERN_MATCHING: solve_t5,
    TaskId.REFLECTION_COMPLETION: solve_t6,
    TaskId.ROTATION_COMPLETION: solve_t7,
}


def solve(task: TaskId, q: Grid) -> SolveOutcome:
    return SOLVERS[task](q)


def infer_task(question: Grid, answer: Grid) -> InferResult:
    """Identify which law turns the question into the answer.

    Runs all seven solvers; the unique one reproducing the answer wins.
    Zero matches or two or more matches are structured rejections.
    """
    if question.array.shape != answer.array.shape:
        raise ValueError("context question and answer must share dimensions")
    matches = tuple(_matching_tasks(question.array, answer.array))
    if len(matches) == 1:
        return InferResult(matches[0], matches)
    if not matches:
        return InferResult(None, matches, "no-match")
    return InferResult(None, matches, AMBIGUOUS)


def oracle_agent(episode: Episode) -> Grid:
    """Perfect-knowledge agent: infer the law from the context, then
    generate the test answer from scratch with that law's solver.

    Raises ContextRejected when the context does not pin down a unique
    law, and never guesses.
    """
    result = infer_task(episode.context.question, episode.context.answer)
    if not result.ok:
        raise ContextRejected(result)
    outcome = SOLVERS[result.task](episode.test_question)
    if not outcome.ok:
        raise ContextRejected(InferResult(None, (result.task,), outcome.reason))
    return outcome.answer

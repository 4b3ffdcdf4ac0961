"""Codec canonicality, manifest reproducibility, statistics, rendering."""

from __future__ import annotations

import json

import numpy as np
import pytest

from pqa import Grid, Rng, TaskId
from pqa.dataset_io import (
    DEFAULT_PALETTE,
    FormatError,
    StatsAccumulator,
    compute_stats,
    dataset_checksum,
    episode_pairs,
    load_dataset,
    params_fingerprint,
    read_episode_json,
    render_grid,
    write_dataset,
    write_episode_json,
)
from pqa.taskgen import GenParams, generate_dataset, make_episodes
from pqa.tasks import Episode, Pair


def _episode() -> Episode:
    pairs = generate_dataset(TaskId.CLOSURE_FILLING, 2, seed=60)
    return make_episodes(pairs, seed=60)[0]


# -- codec ------------------------------------------------------------------------


def test_round_trip_identity():
    e = _episode()
    back = read_episode_json(write_episode_json(e), task=e.task)
    assert back.context.question == e.context.question
    assert back.context.answer == e.context.answer
    assert back.test_question == e.test_question
    assert back.test_answer == e.test_answer


def test_canonical_bytes_golden():
    tiny = Episode(
        context=Pair(Grid.from_rows([[0, 1], [2, 3]]), Grid.from_rows([[0, 1], [2, 9]])),
        test_question=Grid.from_rows([[4]]),
        test_answer=Grid.from_rows([[5]]),
    )
    blob = write_episode_json(tiny)
    assert blob == (
        b'{"train":[{"input":[[0,1],[2,3]],"output":[[0,1],[2,9]]}],'
        b'"test":[{"input":[[4]],"output":[[5]]}]}\n'
    )


def test_write_read_write_byte_stable():
    e = _episode()
    blob = write_episode_json(e)
    assert write_episode_json(read_episode_json(blob)) == blob


@pytest.mark.parametrize(
    "mutate,code",
    [
        (lambda o: o["train"][0]["input"].__setitem__(0, o["train"][0]["input"][0][:-1]), "ragged-rows"),
        (lambda o: o["train"][0]["input"][0].__setitem__(0, 11), "symbol-range"),
        (lambda o: o["train"][0]["input"][0].__setitem__(0, -2), "symbol-range"),
        (lambda o: o["test"][0]["input"].__setitem__(slice(None), [[0] * 31]), "dims"),
        (lambda o: o.__setitem__("extra", 1), "schema"),
        (lambda o: o.pop("test"), "schema"),
    ],
)
def test_malformed_files_rejected(mutate, code):
    obj = json.loads(write_episode_json(_episode()))
    mutate(obj)
    with pytest.raises(FormatError) as exc:
        read_episode_json(json.dumps(obj))
    assert exc.value.code == code


def test_malformed_json_rejected():
    with pytest.raises(FormatError) as exc:
        read_episode_json(b'{"train": [')
    assert exc.value.code == "json"


def test_wide_grid_rejected():
    rows = [[0] * 31]
    obj = {"train": [{"input": rows, "output": rows}], "test": [{"input": rows, "output": rows}]}
    with pytest.raises(FormatError) as exc:
        read_episode_json(json.dumps(obj))
    assert exc.value.code == "dims"


# -- dataset trees -----------------------------------------------------------------


def test_write_then_load_dataset(tmp_path):
    manifest = write_dataset(tmp_path, TaskId.CONTINUITY_CONNECTION, count=8, seed=61)
    loaded_manifest, episodes = load_dataset(tmp_path / "t2")
    assert loaded_manifest == manifest
    assert len(episodes) == 4
    assert all(e.episode_id for e in episodes)
    assert dataset_checksum(tmp_path / "t2") == manifest.checksum


def test_manifest_checksum_reproducible(tmp_path):
    m1 = write_dataset(tmp_path / "a", TaskId.PROXIMITY_IDENTIFICATION, count=10, seed=62)
    m2 = write_dataset(tmp_path / "b", TaskId.PROXIMITY_IDENTIFICATION, count=10, seed=62)
    assert m1.checksum == m2.checksum
    m3 = write_dataset(tmp_path / "c", TaskId.PROXIMITY_IDENTIFICATION, count=10, seed=63)
    assert m3.checksum != m1.checksum


def test_jobs_do_not_change_bytes(tmp_path):
    m1 = write_dataset(tmp_path / "a", TaskId.SHAPE_RECONSTRUCTION, count=8, seed=64, jobs=1)
    m2 = write_dataset(tmp_path / "b", TaskId.SHAPE_RECONSTRUCTION, count=8, seed=64, jobs=2)
    assert m1.checksum == m2.checksum
    for f1 in sorted((tmp_path / "a" / "t4").glob("*.json")):
        f2 = tmp_path / "b" / "t4" / f1.name
        assert f1.read_bytes() == f2.read_bytes()


def test_params_fingerprint_changes_with_knobs():
    assert params_fingerprint(GenParams()) != params_fingerprint(GenParams(min_dim=9))
    assert params_fingerprint(GenParams()) == params_fingerprint(GenParams())


# -- statistics ---------------------------------------------------------------------


def test_stats_single_ring_pair():
    # 5x5 pair differing at exactly the center cell: 1/25 = 4.0%
    ring = Grid.from_rows(
        [
            [0, 0, 0, 0, 0],
            [0, 3, 3, 3, 0],
            [0, 3, 0, 3, 0],
            [0, 3, 3, 3, 0],
            [0, 0, 0, 0, 0],
        ]
    )
    answer = ring.set((2, 2), 3)
    assert int(np.count_nonzero(ring.array != answer.array)) == 1  # direct count
    stats = compute_stats([Pair(ring, answer)])
    assert stats.avg_slots_pct == pytest.approx(4.0)
    assert stats.avg_symbols == 2.0
    assert stats.size_histogram == {(5, 5): 1}
    (x, y), = stats.key_region_centers
    assert x == pytest.approx(0.5) and y == pytest.approx(0.5)


def test_stats_identical_pairs_zero_slots():
    g = Grid.filled(4, 4, 1)
    stats = compute_stats([Pair(g, g)])
    assert stats.avg_slots_pct == 0.0
    assert stats.key_region_centers == []


def test_stats_centers_within_unit_square():
    pairs = generate_dataset(TaskId.REFLECTION_COMPLETION, 30, seed=65)
    stats = compute_stats(pairs)
    assert all(0 < x < 1 and 0 < y < 1 for x, y in stats.key_region_centers)
    assert 0 <= stats.avg_slots_pct <= 100


def test_stats_accumulator_matches_batch():
    pairs = generate_dataset(TaskId.CLOSURE_FILLING, 20, seed=66)
    acc = StatsAccumulator()
    for p in pairs[:10]:
        acc.add(p)
    for p in pairs[10:]:
        acc.add(p)
    assert acc.finish() == compute_stats(pairs)


def test_stats_empty_rejected():
    with pytest.raises(ValueError):
        compute_stats([])


def test_episode_pairs_unfolds_both_sides():
    pairs = generate_dataset(TaskId.ROTATION_COMPLETION, 6, seed=67)
    episodes = make_episodes(pairs, seed=67)
    unfolded = episode_pairs(episodes)
    assert len(unfolded) == 2 * len(episodes)


# -- rendering -----------------------------------------------------------------------


def test_render_single_pixel():
    out = render_grid(Grid.from_rows([[7]]), cell_px=1)
    assert out == b"P6\n1 1\n255\n" + bytes(DEFAULT_PALETTE[7])


def test_render_dimensions_scale():
    g = Grid.filled(3, 2, 1)
    out = render_grid(g, cell_px=4)
    header, _, rest = out.partition(b"\n")
    dims = rest.split(b"\n")[0]
    assert dims == b"12 8"
    assert len(out.split(b"\n", 3)[3]) == 12 * 8 * 3


def test_render_injective_on_grids():
    rng = Rng(68, 0)
    a = Grid(rng.randints(0, 9, 16).reshape(4, 4))
    b = Grid(rng.randints(0, 9, 16).reshape(4, 4))
    assert (render_grid(a) == render_grid(b)) == (a == b)
    assert render_grid(a) == render_grid(Grid(a.array.copy()))

"""Serialization, dataset manifests, corpus statistics and pixmap rendering.

Episodes are stored one per file in an ARC-compatible JSON shape:

    {"train": [{"input": [[...]], "output": [[...]]}],
     "test":  [{"input": [[...]], "output": [[...]]}]}

with grids as row-of-rows of integers 0..9. Serialization is canonical
(fixed key order, compact separators, trailing newline) so checksums
are byte-stable. A dataset directory holds <task>/<index>.json files
plus a manifest.json whose checksum is an order-independent combine of
the per-episode digests.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import MAX_SIDE, NUM_SYMBOLS, Grid
from .tasks import Episode, Pair, TaskId
from .taskgen import GenParams, generate_dataset, make_episodes

FORMAT_VERSION = 1

# display colors for the 10 symbols (also fixed in the browser editor)
DEFAULT_PALETTE: tuple[tuple[int, int, int], ...] = (
    (0x00, 0x00, 0x00),  # 0 black (background)
    (0x00, 0x74, 0xD9),  # 1 blue
    (0xFF, 0x41, 0x36),  # 2 red
    (0x2E, 0xCC, 0x40),  # 3 green
    (0xFF, 0xDC, 0x00),  # 4 yellow
    (0xAA, 0xAA, 0xAA),  # 5 grey
    (0xF0, 0x12, 0xBE),  # 6 fuchsia
    (0xFF, 0x85, 0x1B),  # 7 orange
    (0x7F, 0xDB, 0xFF),  # 8 sky
    (0x87, 0x0C, 0x25),  # 9 maroon
)


class FormatError(ValueError):
    """A file violates the dataset format; code names the first violation."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


# -- canonical episode codec ----------------------------------------------------


def _grid_rows_checked(rows: object, what: str) -> Grid:
    if not isinstance(rows, list) or not rows:
        raise FormatError("schema", f"{what}: grid must be a non-empty list of rows")
    width = None
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not row:
            raise FormatError("schema", f"{what}: row {i} must be a non-empty list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise FormatError("ragged-rows", f"{what}: row {i} has length {len(row)}, expected {width}")
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not (0 <= v < NUM_SYMBOLS):
                raise FormatError("symbol-range", f"{what}: cell ({j},{i}) = {v!r} is not a symbol 0..9")
    if len(rows) > MAX_SIDE or width > MAX_SIDE:
        raise FormatError("dims", f"{what}: dimensions {width}x{len(rows)} exceed {MAX_SIDE}x{MAX_SIDE}")
    return Grid.from_rows(rows)


def write_episode_json(e: Episode) -> bytes:
    obj = {
        "train": [{"input": e.context.question.to_rows(), "output": e.context.answer.to_rows()}],
        "test": [{"input": e.test_question.to_rows(), "output": e.test_answer.to_rows()}],
    }
    return (json.dumps(obj, separators=(",", ":")) + "\n").encode("ascii")


def read_episode_json(data: bytes | str, task: TaskId | None = None, episode_id: str | None = None) -> Episode:
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise FormatError("json", f"malformed JSON: {e}") from None
    if not isinstance(obj, dict) or set(obj) != {"train", "test"}:
        raise FormatError("schema", "episode object must have exactly the keys 'train' and 'test'")
    for part in ("train", "test"):
        if not isinstance(obj[part], list) or len(obj[part]) != 1:
            raise FormatError("schema", f"'{part}' must be a list with exactly one entry")
        entry = obj[part][0]
        if not isinstance(entry, dict) or set(entry) != {"input", "output"}:
            raise FormatError("schema", f"'{part}' entry must have exactly 'input' and 'output'")
    ctx_q = _grid_rows_checked(obj["train"][0]["input"], "train input")
    ctx_a = _grid_rows_checked(obj["train"][0]["output"], "train output")
    test_q = _grid_rows_checked(obj["test"][0]["input"], "test input")
    test_a = _grid_rows_checked(obj["test"][0]["output"], "test output")
    if ctx_q.array.shape != ctx_a.array.shape:
        raise FormatError("schema", "context question and answer dimensions differ")
    return Episode(
        context=Pair(ctx_q, ctx_a, task),
        test_question=test_q,
        test_answer=test_a,
        task=task,
        episode_id=episode_id,
    )


# -- manifests and dataset trees -------------------------------------------------


def params_fingerprint(params: GenParams) -> str:
    blob = json.dumps(params.to_dict(), sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def combine_digests(digests: list[bytes]) -> str:
    """Order-independent combine: hash of the sorted per-episode digests."""
    h = hashlib.sha256()
    for d in sorted(digests):
        h.update(d)
    return h.hexdigest()


@dataclass(frozen=True)
class DatasetManifest:
    task: TaskId
    count: int  # pairs consumed; episodes on disk = count // 2
    seed: int
    params_fingerprint: str
    format_version: int
    checksum: str

    def to_dict(self) -> dict:
        return {
            "task": self.task.value,
            "count": self.count,
            "seed": self.seed,
            "params_fingerprint": self.params_fingerprint,
            "format_version": self.format_version,
            "checksum": self.checksum,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetManifest":
        return cls(
            task=TaskId.from_name(d["task"]),
            count=int(d["count"]),
            seed=int(d["seed"]),
            params_fingerprint=str(d["params_fingerprint"]),
            format_version=int(d["format_version"]),
            checksum=str(d["checksum"]),
        )


def write_dataset(
    out_dir: Path | str,
    task: TaskId,
    count: int,
    seed: int,
    params: GenParams | None = None,
    jobs: int = 1,
) -> DatasetManifest:
    """Generate count pairs, fold them into episodes and write the tree."""
    params = params or GenParams()
    pairs = generate_dataset(task, count, seed, params, jobs=jobs)
    episodes = make_episodes(pairs, seed)
    task_dir = Path(out_dir) / task.value
    task_dir.mkdir(parents=True, exist_ok=True)
    digests = []
    for i, episode in enumerate(episodes):
        blob = write_episode_json(episode)
        digests.append(hashlib.sha256(blob).digest())
        (task_dir / f"{i:05d}.json").write_bytes(blob)
    manifest = DatasetManifest(
        task=task,
        count=count,
        seed=seed,
        params_fingerprint=params_fingerprint(params),
        format_version=FORMAT_VERSION,
        checksum=combine_digests(digests),
    )
    (task_dir / "manifest.json").write_text(json.dumps(manifest.to_dict(), indent=2) + "\n")
    return manifest


def load_dataset(task_dir: Path | str) -> tuple[DatasetManifest, list[Episode]]:
    """Read one task directory back into episodes with ids from file stems."""
    task_dir = Path(task_dir)
    manifest_path = task_dir / "manifest.json"
    if not manifest_path.exists():
        raise FormatError("schema", f"no manifest.json in {task_dir}")
    manifest = DatasetManifest.from_dict(json.loads(manifest_path.read_text()))
    episodes = []
    for path in sorted(task_dir.glob("*.json")):
        if path.name == "manifest.json":
            continue
        eid = f"{manifest.task.value}-{path.stem}"
        episodes.append(read_episode_json(path.read_bytes(), task=manifest.task, episode_id=eid))
    return manifest, episodes


def dataset_checksum(task_dir: Path | str) -> str:
    """Recompute the combined checksum from the files on disk."""
    digests = []
    for path in sorted(Path(task_dir).glob("*.json")):
        if path.name == "manifest.json":
            continue
        digests.append(hashlib.sha256(path.read_bytes()).digest())
    return combine_digests(digests)


# -- statistics -------------------------------------------------------------------


@dataclass(frozen=True)
class TaskStats:
    avg_symbols: float
    avg_slots_pct: float
    key_region_centers: list[tuple[float, float]]
    size_histogram: dict[tuple[int, int], int]

    def to_dict(self) -> dict:
        return {
            "avg_symbols": self.avg_symbols,
            "avg_slots_pct": self.avg_slots_pct,
            "key_region_centers": [[x, y] for x, y in self.key_region_centers],
            "size_histogram": {f"{w}x{h}": n for (w, h), n in sorted(self.size_histogram.items())},
        }


class StatsAccumulator:
    """Streaming accumulator so corpus-scale runs never hold all pairs."""

    def __init__(self) -> None:
        self.n = 0
        self.symbols_sum = 0
        self.slots_sum = 0.0
        self.centers: list[tuple[float, float]] = []
        self.sizes: dict[tuple[int, int], int] = {}

    def add(self, pair: Pair) -> None:
        q, a = pair.question, pair.answer
        self.n += 1
        self.symbols_sum += len(np.unique(q.array))
        w, h = q.width, q.height
        delta = q.array != a.array
        changed = int(np.count_nonzero(delta))
        self.slots_sum += 100.0 * changed / (w * h)
        if changed:
            rows, cols = np.nonzero(delta)
            self.centers.append((float((cols.mean() + 0.5) / w), float((rows.mean() + 0.5) / h)))
        self.sizes[(w, h)] = self.sizes.get((w, h), 0) + 1

    def finish(self) -> TaskStats:
        if self.n == 0:
            raise ValueError("no pairs accumulated")
        return TaskStats(
            avg_symbols=self.symbols_sum / self.n,
            avg_slots_pct=self.slots_sum / self.n,
            key_region_centers=self.centers,
            size_histogram=self.sizes,
        )


def compute_stats(pairs: list[Pair]) -> TaskStats:
    """Mean distinct symbols, modified-cell percentage, key-region
    centers (centroid of the changed cells, normalized) and a size
    histogram over the given pairs."""
    if not pairs:
        raise ValueError("compute_stats requires at least one pair")
    acc = StatsAccumulator()
    for p in pairs:
        acc.add(p)
    return acc.finish()


def episode_pairs(episodes: list[Episode]) -> list[Pair]:
    """Both pairs of every episode (context, and test as a pair)."""
    out = []
    for e in episodes:
        out.append(e.context)
        out.append(Pair(e.test_question, e.test_answer, e.task))
    return out


# -- pixel rendering ---------------------------------------------------------------


def render_grid(
    g: Grid,
    cell_px: int = 1,
    palette: tuple[tuple[int, int, int], ...] = DEFAULT_PALETTE,
) -> bytes:
    """Uncompressed binary pixmap (P6) with one palette block per cell."""
    if cell_px < 1:
        raise ValueError("cell_px must be >= 1")
    if len(palette) != NUM_SYMBOLS:
        raise ValueError(f"palette must have {NUM_SYMBOLS} colors")
    lut = np.asarray(palette, dtype=np.uint8)
    rgb = lut[g.array]
    rgb = np.repeat(np.repeat(rgb, cell_px, axis=0), cell_px, axis=1)
    header = f"P6\n{g.width * cell_px} {g.height * cell_px}\n255\n".encode("ascii")
    return header + rgb.tobytes()

"""Gestalt grid puzzles: generators, solvers, datasets and evaluation."""

from .grid import (
    BACKGROUND,
    MAX_SIDE,
    NUM_SYMBOLS,
    Component,
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
from .rng import Rng
from .tasks import ALL_TASKS, Episode, Pair, TaskId
from .oracle import (
    SOLVERS,
    ContextRejected,
    InferResult,
    SolveOutcome,
    infer_task,
    oracle_agent,
    solve,
    solve_t1,
    solve_t2,
    solve_t3,
    solve_t4,
    solve_t5,
    solve_t6,
    solve_t7,
)
from .taskgen import (
    DEFAULT_PARAMS,
    GenerationError,
    GenParams,
    generate_dataset,
    generate_pair,
    grow_blob,
    make_episodes,
)
from .dataset_io import (
    DEFAULT_PALETTE,
    DatasetManifest,
    FormatError,
    TaskStats,
    compute_stats,
    load_dataset,
    read_episode_json,
    render_grid,
    write_dataset,
    write_episode_json,
)
from .encode import PAD_INDEX, PaddedBatch, pe_2d, pe_axis, pe_table, to_indices, unpad
from .evalharness import PredictionSet, Report, baseline_identity, run_agent, score

__version__ = "0.1.0"

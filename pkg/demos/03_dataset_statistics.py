#!/usr/bin/env python3
"""Corpus statistics: symbol counts, edit percentages, key-region map.

Generates a few thousand pairs per task and reproduces the dataset's
headline statistics. The full-scale targets (100k pairs per task) are
asserted in tests/test_acceptance.py; this demo uses 2 000 per task so
it finishes in under a minute, and the numbers land close already.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from pqa import ALL_TASKS, Rng, generate_pair
from pqa.dataset_io import StatsAccumulator

REFERENCE = {
    "t1": (2.0, 12.9),
    "t2": (2.0, 3.6),
    "t3": (5.0, 4.0),
    "t4": (2.0, 7.6),
    "t5": (5.0, 15.3),
    "t6": (3.0, 9.8),
    "t7": (5.0, 12.5),
}

N = 2_000


def main():
    print(f"{'task':<6}{'avg symbols':>12}{'reference':>10}{'avg slots %':>13}{'reference':>10}")
    centers_by_task = {}
    sizes = {}
    for task in ALL_TASKS:
        acc = StatsAccumulator()
        for i in range(N):
            acc.add(generate_pair(task, Rng(seed=99, stream=i)))
        stats = acc.finish()
        ref_sym, ref_slots = REFERENCE[task.value]
        print(
            f"{task.value:<6}{stats.avg_symbols:>12.3f}{ref_sym:>10.1f}"
            f"{stats.avg_slots_pct:>13.2f}{ref_slots:>10.1f}"
        )
        centers_by_task[task.value] = stats.key_region_centers
        for dims, count in stats.size_histogram.items():
            sizes[dims] = sizes.get(dims, 0) + count

    fig, axes = plt.subplots(1, 2, figsize=(11, 5))
    xs = [x for centers in centers_by_task.values() for x, _ in centers]
    ys = [y for centers in centers_by_task.values() for _, y in centers]
    axes[0].hexbin(xs, ys, gridsize=24, extent=(0, 1, 0, 1), cmap="viridis")
    axes[0].set_title("key region centers (normalized)")
    axes[0].set_xlabel("x")
    axes[0].set_ylabel("y")

    ws = [w for (w, h), n in sizes.items() for _ in range(n)]
    hs = [h for (w, h), n in sizes.items() for _ in range(n)]
    axes[1].hist2d(ws, hs, bins=range(8, 32), cmap="viridis")
    axes[1].set_title("grid size distribution")
    axes[1].set_xlabel("width")
    axes[1].set_ylabel("height")

    fig.tight_layout()
    out = "demos_stats.png"
    fig.savefig(out, dpi=110)
    print(f"\nwrote {out} (key-region density and size histogram)")


if __name__ == "__main__":
    main()

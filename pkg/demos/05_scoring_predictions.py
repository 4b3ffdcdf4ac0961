#!/usr/bin/env python3
"""The evaluation protocol: datasets on disk, agents, exact-match reports.

Builds a small dataset tree for every task, runs the built-in perfect
and floor agents over it, and scores a synthetic "external model" file
to show how third-party predictions plug in. Credit is all-or-nothing:
a single wrong cell forfeits the episode.
"""

import json
import tempfile
from pathlib import Path

from pqa import ALL_TASKS
from pqa.dataset_io import load_dataset, write_dataset
from pqa.evalharness import PredictionSet, run_agent, score


def main():
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        episodes = []
        for task in ALL_TASKS:
            write_dataset(root, task, count=20, seed=5)
            episodes.extend(load_dataset(root / task.value)[1])
        print(f"dataset: {len(episodes)} episodes across {len(ALL_TASKS)} tasks\n")

        for agent in ("oracle", "identity"):
            report = score(episodes, run_agent(episodes, agent))
            print(report.format_table())
            print()

        # an external agent ships a JSON file; here it answers correctly
        # whenever the episode index is even, and garbles one cell otherwise
        external = {}
        for i, e in enumerate(episodes):
            grid = e.test_answer
            if i % 2:
                grid = grid.set((0, 0), (grid.get((0, 0)) + 1) % 10)
            external[e.episode_id] = grid.to_rows()
        blob = json.dumps({"agent": "external-model", "predictions": external})
        report = score(episodes, PredictionSet.from_json(blob))
        print(report.format_table())
        print("\none wrong cell per odd episode halves the score: exact-match only")


if __name__ == "__main__":
    main()

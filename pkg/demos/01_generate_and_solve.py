#!/usr/bin/env python3
"""Generate one puzzle per Gestalt law and solve it with the rule engine.

Walks through the core loop: a seeded generator builds a question/answer
pair, the matching solver reconstructs the answer from the question
alone, and the two agree cell for cell.
"""

from pqa import ALL_TASKS, Rng, generate_pair
from pqa.oracle import SOLVERS

GLYPHS = ".123456789"


def show(grid, label):
    print(f"  {label} ({grid.width}x{grid.height})")
    for row in grid.to_rows():
        print("    " + "".join(GLYPHS[v] for v in row))


def main():
    for task in ALL_TASKS:
        print(f"\n=== {task.value}: {task.label} ===")
        # small grids keep the printout readable
        from pqa import GenParams

        pair = generate_pair(task, Rng(seed=2024, stream=3), GenParams(min_dim=8, max_dim=12))
        show(pair.question, "question")
        show(pair.answer, "answer")

        outcome = SOLVERS[task](pair.question)
        assert outcome.ok and outcome.answer == pair.answer
        print("  solver reproduces the answer exactly: OK")


if __name__ == "__main__":
    main()

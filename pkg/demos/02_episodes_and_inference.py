#!/usr/bin/env python3
"""Episodes: infer the hidden law from one exemplar, then answer a fresh
question from scratch.

This is the protocol an agent faces: it sees a context pair, must work
out which grouping rule produced it, and applies that rule to a new
question it has never seen.
"""

from pqa import TaskId, generate_dataset, infer_task, make_episodes, oracle_agent

GLYPHS = ".123456789"


def show(grid, label):
    print(f"  {label}:")
    for row in grid.to_rows():
        print("    " + "".join(GLYPHS[v] for v in row))


def main():
    from pqa import GenParams

    params = GenParams(min_dim=8, max_dim=12)
    pairs = generate_dataset(TaskId.CONTINUITY_CONNECTION, count=6, seed=7, params=params)
    episodes = make_episodes(pairs, seed=7)
    print(f"built {len(episodes)} episodes from {len(pairs)} pairs (half context, half test)\n")

    episode = episodes[0]
    show(episode.context.question, "context question")
    show(episode.context.answer, "context answer")

    # the engine does not get told the task; it must recognize it
    result = infer_task(episode.context.question, episode.context.answer)
    print(f"\ninferred law: {result.task.value} ({result.task.label})")

    show(episode.test_question, "\ntest question")
    predicted = oracle_agent(episode)
    show(predicted, "generated answer")
    assert predicted == episode.test_answer
    print("\ngenerated answer matches the hidden ground truth: OK")

    # a pair that several laws explain equally is rejected, not guessed
    identity = episode.test_question
    rejected = infer_task(identity, identity)
    print(f"identity pair rejected as: {rejected.reason} (matches {[t.value for t in rejected.matches]})")


if __name__ == "__main__":
    main()

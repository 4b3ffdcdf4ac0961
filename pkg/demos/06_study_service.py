#!/usr/bin/env python3
"""The human-study loop, scripted against the HTTP service.

Plays a perfect participant: open a session, peek at one extra example,
then answer three puzzles in a row using the rule engine. The session
then shows up in the aggregated study statistics next to the published
reference means.
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from pqa import Grid, TaskId
from pqa.oracle import SOLVERS
from pqa.service import create_app


def main():
    with tempfile.TemporaryDirectory() as tmp:
        app = create_app(seed=11, journal=Path(tmp) / "journal.jsonl")
        with TestClient(app) as http:
            opened = http.post("/session", json={"task": "t1"}).json()
            sid = opened["session_id"]
            print(f"session {sid[:8]}… opened on t1, contexts viewed: {opened['contexts_viewed']}")

            ctx = http.post(f"/session/{sid}/context").json()
            print(f"asked for another example, contexts viewed: {ctx['contexts_viewed']}")

            while True:
                puzzle = http.get(f"/session/{sid}/puzzle").json()
                solved = SOLVERS[TaskId.CLOSURE_FILLING](Grid.from_rows(puzzle["question"]))
                verdict = http.post(
                    f"/session/{sid}/answer",
                    json={"episode_id": puzzle["episode_id"], "grid": solved.answer.to_rows()},
                ).json()
                print(f"submitted: correct={verdict['correct']} streak={verdict['streak']}")
                if verdict["completed"]:
                    print(
                        f"completed after {verdict['contexts_viewed']} examples "
                        f"in {verdict['elapsed_seconds']:.2f}s"
                    )
                    break

            stats = http.get("/stats").json()
            t1 = stats["tasks"]["t1"]
            ref = stats["reference"]["t1"]
            print(
                f"\nstudy stats for t1: {t1['completed_sessions']} session(s), "
                f"mean contexts {t1['mean_contexts']:.1f} (published reference: {ref['contexts']})"
            )
            journal = (Path(tmp) / "journal.jsonl").read_text().splitlines()
            print(f"journal recorded {len(journal)} events (append-only, replayable)")


if __name__ == "__main__":
    main()

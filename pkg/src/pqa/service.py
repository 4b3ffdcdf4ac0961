"""HTTP service for the interactive human-study protocol.

A session serves context exemplars on demand and fresh test puzzles
for one task; three consecutive exact-match answers complete it.
Episodes are generated on the fly from (service seed, session id,
counter), never from a static dataset, so no two participants can
memorize each other's puzzles. Every state change is appended to a
JSONL journal; restarting with the same seed and journal restores all
sessions, including pending puzzles.

Ground-truth answers for pending puzzles are never serialized into any
response until the attempt is resolved.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .grid import Grid, GridError, MAX_SIDE, NUM_SYMBOLS
from .rng import Rng
from .taskgen import GenParams, generate_pair
from .tasks import Pair, TaskId

# human-study reference points (mean context pairs and minutes per task)
# shown alongside collected data in /stats, never asserted against it
REFERENCE_HUMAN_STUDY = {
    "t1": {"contexts": 1.5, "minutes": 2.48},
    "t2": {"contexts": 1.75, "minutes": 2.67},
    "t3": {"contexts": 3.0, "minutes": 5.93},
    "t4": {"contexts": 1.0, "minutes": 0.77},
    "t5": {"contexts": 1.0, "minutes": 3.95},
    "t6": {"contexts": 1.25, "minutes": 2.54},
    "t7": {"contexts": 1.0, "minutes": 1.65},
}

STREAK_TO_COMPLETE = 3


@dataclass
class SessionRecord:
    session_id: str
    task: TaskId
    contexts_viewed: int = 0
    started_at: float = 0.0
    finished_at: float | None = None
    streak: int = 0
    attempts: list[tuple[str, bool, float]] = field(default_factory=list)
    completed: bool = False


@dataclass
class _SessionState:
    record: SessionRecord
    counter: int = 0  # pairs drawn so far (contexts and puzzles)
    pending: tuple[str, Pair] | None = None  # (episode_id, pair); answer stays server-side
    lock: threading.Lock = field(default_factory=threading.Lock)


class StudyService:
    """Session bookkeeping behind the HTTP endpoints."""

    def __init__(self, seed: int = 0, journal: Path | str | None = None, params: GenParams | None = None):
        self.seed = seed
        self.params = params or GenParams()
        self.journal_path = Path(journal) if journal else None
        self._sessions: dict[str, _SessionState] = {}
        self._dir_lock = threading.Lock()
        self._journal_lock = threading.Lock()
        self._clock = time.time
        if self.journal_path and self.journal_path.exists():
            self._replay()

    # -- deterministic per-session pair stream --------------------------------

    def _draw_pair(self, task: TaskId, session_id: str, counter: int) -> Pair:
        digest = hashlib.blake2b(f"{session_id}:{counter}".encode(), digest_size=8).digest()
        stream = int.from_bytes(digest, "little")
        return generate_pair(task, Rng(self.seed, stream), self.params)

    def _log(self, event: dict) -> None:
        if not self.journal_path:
            return
        with self._journal_lock:
            with self.journal_path.open("a") as f:
                f.write(json.dumps(event, separators=(",", ":")) + "\n")

    def _replay(self) -> None:
        for line in self.journal_path.read_text().splitlines():
            if not line.strip():
                continue
            ev = json.loads(line)
            kind = ev["event"]
            if kind == "session_created":
                rec = SessionRecord(
                    session_id=ev["session_id"],
                    task=TaskId.from_name(ev["task"]),
                    contexts_viewed=1,
                    started_at=ev["ts"],
                )
                self._sessions[ev["session_id"]] = _SessionState(record=rec, counter=1)
            elif kind == "context_served":
                st = self._sessions[ev["session_id"]]
                st.record.contexts_viewed += 1
                st.counter = ev["counter"] + 1
            elif kind == "puzzle_served":
                st = self._sessions[ev["session_id"]]
                pair = self._draw_pair(st.record.task, ev["session_id"], ev["counter"])
                st.pending = (ev["episode_id"], pair)
                st.counter = ev["counter"] + 1
            elif kind == "attempt":
                st = self._sessions[ev["session_id"]]
                st.record.attempts.append((ev["episode_id"], ev["correct"], ev["ts"]))
                st.record.streak = ev["streak"]
                st.pending = None
                if ev["completed"]:
                    st.record.completed = True
                    st.record.finished_at = ev["ts"]

    def _now(self, rec: SessionRecord) -> float:
        t = self._clock()
        last = rec.attempts[-1][2] if rec.attempts else rec.started_at
        return max(t, last)  # timestamps never run backwards within a session

    def _state(self, session_id: str) -> _SessionState:
        with self._dir_lock:
            st = self._sessions.get(session_id)
        if st is None:
            raise KeyError(session_id)
        return st

    # -- operations -----------------------------------------------------------

    def create_session(self, task: TaskId) -> tuple[SessionRecord, Pair]:
        session_id = uuid.uuid4().hex
        rec = SessionRecord(session_id=session_id, task=task, contexts_viewed=1, started_at=self._clock())
        st = _SessionState(record=rec, counter=1)
        with self._dir_lock:
            self._sessions[session_id] = st
        first = self._draw_pair(task, session_id, 0)
        self._log({"event": "session_created", "session_id": session_id, "task": task.value, "ts": rec.started_at})
        return rec, first

    def next_context(self, session_id: str) -> tuple[Pair, int]:
        st = self._state(session_id)
        with st.lock:
            if st.record.completed:
                raise CompletedError(session_id)
            counter = st.counter
            st.counter += 1
            st.record.contexts_viewed += 1
            pair = self._draw_pair(st.record.task, session_id, counter)
            self._log({"event": "context_served", "session_id": session_id, "counter": counter, "ts": self._now(st.record)})
            return pair, st.record.contexts_viewed

    def get_puzzle(self, session_id: str) -> tuple[str, Grid]:
        st = self._state(session_id)
        with st.lock:
            if st.record.completed:
                raise CompletedError(session_id)
            if st.pending is None:
                counter = st.counter
                st.counter += 1
                episode_id = f"{session_id}:{counter}"
                pair = self._draw_pair(st.record.task, session_id, counter)
                st.pending = (episode_id, pair)
                self._log(
                    {
                        "event": "puzzle_served",
                        "session_id": session_id,
                        "episode_id": episode_id,
                        "counter": counter,
                        "ts": self._now(st.record),
                    }
                )
            episode_id, pair = st.pending
            return episode_id, pair.question

    def submit_answer(self, session_id: str, episode_id: str, grid: Grid) -> dict:
        st = self._state(session_id)
        with st.lock:
            rec = st.record
            if rec.completed:
                raise CompletedError(session_id)
            if st.pending is None or st.pending[0] != episode_id:
                raise StalePuzzleError(episode_id)
            _, pair = st.pending
            correct = grid == pair.answer  # exact match, identical to harness scoring
            ts = self._now(rec)
            rec.streak = rec.streak + 1 if correct else 0
            rec.attempts.append((episode_id, correct, ts))
            st.pending = None
            if rec.streak >= STREAK_TO_COMPLETE:
                rec.completed = True
                rec.finished_at = ts
            self._log(
                {
                    "event": "attempt",
                    "session_id": session_id,
                    "episode_id": episode_id,
                    "correct": correct,
                    "streak": rec.streak,
                    "completed": rec.completed,
                    "ts": ts,
                }
            )
            out = {"correct": correct, "streak": rec.streak, "completed": rec.completed}
            if rec.completed:
                out["contexts_viewed"] = rec.contexts_viewed
                out["elapsed_seconds"] = rec.finished_at - rec.started_at
            return out

    def stats(self) -> dict:
        with self._dir_lock:
            records = [st.record for st in self._sessions.values()]
        tasks: dict[str, dict] = {}
        for t in TaskId:
            done = [r for r in records if r.task is t and r.completed]
            tasks[t.value] = {
                "completed_sessions": len(done),
                "mean_contexts": (sum(r.contexts_viewed for r in done) / len(done)) if done else None,
                "mean_minutes": (sum((r.finished_at - r.started_at) / 60.0 for r in done) / len(done)) if done else None,
            }
        return {"tasks": tasks, "reference": REFERENCE_HUMAN_STUDY}


class CompletedError(Exception):
    pass


class StalePuzzleError(Exception):
    pass


# -- HTTP layer -----------------------------------------------------------------


class CreateSessionBody(BaseModel):
    task: str


class AnswerBody(BaseModel):
    episode_id: str
    grid: list[list[int]]


def _pair_payload(pair: Pair) -> dict:
    return {"question": pair.question.to_rows(), "answer": pair.answer.to_rows()}


def _parse_grid(rows: list[list[int]]) -> Grid:
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise HTTPException(status_code=422, detail="grid rows must be non-empty and rectangular")
    if len(rows) > MAX_SIDE or len(rows[0]) > MAX_SIDE:
        raise HTTPException(status_code=422, detail=f"grid exceeds {MAX_SIDE}x{MAX_SIDE}")
    if any((not isinstance(v, int)) or v < 0 or v >= NUM_SYMBOLS for r in rows for v in r):
        raise HTTPException(status_code=422, detail="grid cells must be symbols 0..9")
    try:
        return Grid.from_rows(rows)
    except GridError as e:
        raise HTTPException(status_code=422, detail=str(e)) from None


def create_app(
    seed: int = 0,
    journal: Path | str | None = None,
    static_dir: Path | str | None = None,
    params: GenParams | None = None,
) -> FastAPI:
    service = StudyService(seed=seed, journal=journal, params=params)
    app = FastAPI(title="Gestalt puzzle study")
    app.state.service = service

    @app.post("/session")
    def create_session(body: CreateSessionBody):
        try:
            task = TaskId.from_name(body.task)
        except ValueError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None
        rec, first = service.create_session(task)
        return {
            "session_id": rec.session_id,
            "task": task.value,
            "contexts_viewed": rec.contexts_viewed,
            "first_context": _pair_payload(first),
        }

    @app.post("/session/{session_id}/context")
    def next_context(session_id: str):
        try:
            pair, viewed = service.next_context(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session") from None
        except CompletedError:
            raise HTTPException(status_code=409, detail="session already completed") from None
        payload = _pair_payload(pair)
        payload["contexts_viewed"] = viewed
        return payload

    @app.get("/session/{session_id}/puzzle")
    def get_puzzle(session_id: str):
        try:
            episode_id, question = service.get_puzzle(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session") from None
        except CompletedError:
            raise HTTPException(status_code=409, detail="session already completed") from None
        return {"episode_id": episode_id, "question": question.to_rows()}

    @app.post("/session/{session_id}/answer")
    def submit_answer(session_id: str, body: AnswerBody):
        grid = _parse_grid(body.grid)
        try:
            return service.submit_answer(session_id, body.episode_id, grid)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session") from None
        except CompletedError:
            raise HTTPException(status_code=409, detail="session already completed") from None
        except StalePuzzleError:
            raise HTTPException(status_code=409, detail="not the current puzzle") from None

    @app.get("/stats")
    def stats():
        return service.stats()

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="webui")
    return app


def main(argv: list[str] | None = None) -> int:
    import uvicorn

    p = argparse.ArgumentParser(prog="pqa-service", description="human-study puzzle server")
    p.add_argument("--addr", default=os.environ.get("PQA_ADDR", "127.0.0.1:8000"), help="host:port")
    p.add_argument("--seed", type=int, default=int(os.environ.get("PQA_SEED", "0")))
    p.add_argument("--journal", default=None, help="append-only JSONL session journal")
    p.add_argument("--static", default=None, help="directory with the built browser bundle")
    args = p.parse_args(argv)
    host, _, port = args.addr.rpartition(":")
    app = create_app(seed=args.seed, journal=args.journal, static_dir=args.static)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

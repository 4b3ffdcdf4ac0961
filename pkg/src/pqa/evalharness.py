"""Exact-match scoring of agent predictions over episodes.

An episode counts as correct only when the predicted grid matches the
ground-truth answer at every cell (and in dimensions); there is no
partial credit anywhere. The report's overall number is the unweighted
mean of the per-task percentages.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .grid import Grid, GridError
from .oracle import ContextRejected, oracle_agent
from .tasks import Episode, TaskId


@dataclass
class PredictionSet:
    """Named agent's predictions keyed by episode id."""

    agent: str
    entries: dict[str, Grid] = field(default_factory=dict)
    malformed: dict[str, str] = field(default_factory=dict)  # id -> reason

    def to_json(self) -> str:
        obj = {
            "agent": self.agent,
            "predictions": {eid: g.to_rows() for eid, g in sorted(self.entries.items())},
        }
        return json.dumps(obj, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, data: str | bytes) -> "PredictionSet":
        obj = json.loads(data)
        if not isinstance(obj, dict) or "predictions" not in obj:
            raise ValueError("predictions file must be an object with a 'predictions' map")
        ps = cls(agent=str(obj.get("agent", "external")))
        for eid, rows in obj["predictions"].items():
            try:
                ps.entries[eid] = Grid.from_rows(rows)
            except (GridError, TypeError) as e:
                # keep scoring the rest; malformed entries count as incorrect
                ps.malformed[eid] = str(e)
        return ps


@dataclass(frozen=True)
class Report:
    agent: str
    per_task: dict[str, float]  # task -> error-free percentage
    overall: float
    counts: dict[str, dict[str, int]]  # task -> {"episodes": n, "correct": k}
    verdicts: dict[str, bool]
    missing: list[str]
    malformed: list[str]

    def to_dict(self) -> dict:
        return {
            "agent": self.agent,
            "per_task": self.per_task,
            "overall": self.overall,
            "counts": self.counts,
            "verdicts": self.verdicts,
            "missing": self.missing,
            "malformed": self.malformed,
        }

    def format_table(self) -> str:
        """Plain-text table: one row per agent, T1..T7 plus Avg."""
        tasks = [t.value for t in TaskId]
        header = "Agent".ljust(16) + "".join(t.upper().rjust(8) for t in tasks) + "Avg".rjust(8)
        cells = []
        for t in tasks:
            cells.append(f"{self.per_task[t]:.1f}".rjust(8) if t in self.per_task else "-".rjust(8))
        row = self.agent[:15].ljust(16) + "".join(cells) + f"{self.overall:.1f}".rjust(8)
        rule = "-" * len(header)
        return "\n".join([rule, header, rule, row, rule])


def score(episodes: list[Episode], preds: PredictionSet) -> Report:
    """Exact-match scoring; missing or malformed predictions count as
    incorrect and are flagged in the report."""
    totals: dict[str, int] = {}
    correct: dict[str, int] = {}
    verdicts: dict[str, bool] = {}
    missing: list[str] = []
    for e in episodes:
        if e.episode_id is None:
            raise ValueError("episodes must carry ids to be scored")
        task = e.task.value if e.task else "unknown"
        totals[task] = totals.get(task, 0) + 1
        g = preds.entries.get(e.episode_id)
        if g is None:
            missing.append(e.episode_id)
            ok = False
        else:
            ok = g == e.test_answer
        verdicts[e.episode_id] = ok
        if ok:
            correct[task] = correct.get(task, 0) + 1
    per_task = {t: 100.0 * correct.get(t, 0) / totals[t] for t in sorted(totals)}
    overall = sum(per_task.values()) / len(per_task) if per_task else 0.0
    counts = {t: {"episodes": totals[t], "correct": correct.get(t, 0)} for t in sorted(totals)}
    flagged_malformed = sorted(set(preds.malformed) & set(verdicts))
    return Report(
        agent=preds.agent,
        per_task=per_task,
        overall=overall,
        counts=counts,
        verdicts=verdicts,
        missing=sorted(missing),
        malformed=flagged_malformed,
    )


def baseline_identity(e: Episode) -> Grid:
    """Floor reference: answer with the unmodified test question."""
    return e.test_question


def run_agent(episodes: list[Episode], agent: str) -> PredictionSet:
    """Run a built-in agent; episodes it rejects are left unpredicted."""
    if agent == "oracle":
        ps = PredictionSet(agent="oracle")
        for e in episodes:
            try:
                ps.entries[e.episode_id] = oracle_agent(e)
            except ContextRejected:
                pass
        return ps
    if agent == "identity":
        return PredictionSet(agent="identity", entries={e.episode_id: baseline_identity(e) for e in episodes})
    raise ValueError(f"unknown agent {agent!r}; expected 'oracle' or 'identity'")

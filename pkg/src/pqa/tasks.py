"""Task identities and the question/answer pair and episode records."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .grid import Grid


class TaskId(str, Enum):
    """The seven Gestalt-law tasks, with their short wire names."""

    CLOSURE_FILLING = "t1"
    CONTINUITY_CONNECTION = "t2"
    PROXIMITY_IDENTIFICATION = "t3"
    SHAPE_RECONSTRUCTION = "t4"
    SHAPE_PATTERN_MATCHING = "t5"
    REFLECTION_COMPLETION = "t6"
    ROTATION_COMPLETION = "t7"

    @classmethod
    def from_name(cls, name: str) -> "TaskId":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown task {name!r}; expected t1..t7") from None

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    TaskId.CLOSURE_FILLING: "closure filling",
    TaskId.CONTINUITY_CONNECTION: "continuity connection",
    TaskId.PROXIMITY_IDENTIFICATION: "proximity identification",
    TaskId.SHAPE_RECONSTRUCTION: "shape reconstruction",
    TaskId.SHAPE_PATTERN_MATCHING: "shape matching & pattern generalization",
    TaskId.REFLECTION_COMPLETION: "reflection-symmetry completion",
    TaskId.ROTATION_COMPLETION: "rotation-symmetry completion",
}

ALL_TASKS = tuple(TaskId)


@dataclass(frozen=True)
class Pair:
    """A question grid and its unique answer grid.

    task is None for pairs loaded from raw files where the generating
    law is unknown; generated pairs always carry it.
    """

    question: Grid
    answer: Grid
    task: TaskId | None = None

    def __post_init__(self) -> None:
        if self.question.array.shape != self.answer.array.shape:
            raise ValueError("question and answer must have identical dimensions")


@dataclass(frozen=True)
class Episode:
    """A context exemplar pair plus a fresh test question.

    The test answer is ground truth for scoring and is never shown to
    agents; episode_id names the episode in prediction files.
    """

    context: Pair
    test_question: Grid
    test_answer: Grid
    task: TaskId | None = None
    episode_id: str | None = None

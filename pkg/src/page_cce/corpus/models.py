"""
Conversation data model.

These pydantic models mirror the native corpus JSON::

    {"id": "c1",
     "utterances": [{"idx": 1, "speaker": "A", "text": "...", "emotion": "neutral", "vec": [..]}],
     "causes": {"2": [1, 2]},
     "pairs": [[1, 2, true], [2, 2, true]]}

``pairs`` is optional; when present it is the dataset's own candidate list
(e.g. RECCON "Fold-1" negatives) and is used instead of enumeration.
"""
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

NEUTRAL = "neutral"
UNK_EMOTION = "<unk>"


class Utterance(BaseModel):
    """One turn of a conversation."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    index: int = Field(alias="idx", ge=1, description="1-based position in the conversation")
    speaker: str = Field(description="Speaker identifier; only equality between speakers matters")
    text: str = Field(default="", description="Utterance text (may be empty with a precomputed vector)")
    emotion: str = Field(min_length=1, description="Emotion label; 'neutral' marks non-targets")
    precomputed_vector: Optional[List[float]] = Field(
        default=None, alias="vec", description="Externally computed utterance vector"
    )

    @field_validator("emotion")
    @classmethod
    def _normalize_emotion(cls, value: str) -> str:
        value = value.strip().lower()
        if not value:
            raise ValueError("emotion label must be nonempty")
        return value

    @property
    def is_neutral(self) -> bool:
        return self.emotion == NEUTRAL


class Conversation(BaseModel):
    """An ordered conversation with gold cause annotations."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    id: str
    utterances: List[Utterance]
    gold_causes: Dict[int, List[int]] = Field(
        default_factory=dict, alias="causes", description="target index -> cause indices"
    )
    pairs: Optional[List[Tuple[int, int, bool]]] = Field(
        default=None, description="Explicit (o, t, label) candidates supplied by the dataset"
    )

    @model_validator(mode="after")
    def _check_invariants(self) -> "Conversation":
        indices = [u.index for u in self.utterances]
        if indices != list(range(1, len(indices) + 1)):
            raise ValueError(f"utterance indices must be 1..{len(indices)} in order, got {indices}")
        k = len(indices)
        for t, causes in self.gold_causes.items():
            if not 1 <= t <= k:
                raise ValueError(f"cause target {t} outside 1..{k}")
            if self.utterances[t - 1].is_neutral:
                raise ValueError(f"cause target {t} has neutral emotion")
            for c in causes:
                if not 1 <= c <= t:
                    raise ValueError(f"cause {c} of target {t} must satisfy 1 <= c <= t")
        for o, t, _ in self.pairs or []:
            if not 1 <= o <= t <= k:
                raise ValueError(f"pair ({o}, {t}) must satisfy 1 <= o <= t <= {k}")
        return self

    @property
    def k(self) -> int:
        return len(self.utterances)

    def utterance(self, index: int) -> Utterance:
        """Return utterance by 1-based index."""
        return self.utterances[index - 1]

    @property
    def speakers(self) -> List[str]:
        return [u.speaker for u in self.utterances]

    @property
    def emotions(self) -> List[str]:
        return [u.emotion for u in self.utterances]

    @property
    def targets(self) -> List[int]:
        """Indices of non-neutral utterances, ascending."""
        return [u.index for u in self.utterances if not u.is_neutral]

    def is_cause(self, o: int, t: int) -> bool:
        return o in self.gold_causes.get(t, ())

    def to_dict(self) -> dict:
        """Native corpus JSON representation."""
        data = self.model_dump(by_alias=True, exclude_none=True)
        data["causes"] = {str(t): sorted(c) for t, c in sorted(self.gold_causes.items())}
        if self.pairs is not None:
            data["pairs"] = [[o, t, bool(label)] for o, t, label in self.pairs]
        return data

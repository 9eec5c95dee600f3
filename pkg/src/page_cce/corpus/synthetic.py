"""
Synthetic planted-cause conversations for desk-scale experiments.

Each target utterance u_t gets exactly one gold cause, placed by ``placement``:

- ``relation`` (default): the most recent earlier turn by another speaker whose
  speaker-aware relative distance to u_t is at least ``cause_distance`` in
  magnitude. Labels are then a pure function of relative position and speaker
  turns; utterances without such a turn are never targets.
- ``offset``: u_{max(1, t - cause_distance)}.
- ``sampled``: u_{max(1, t - d)} with d drawn from 1..``max_cause_distance``
  with weights ``distance_decay ** (d - 1)`` so near causes dominate.

Optionally the cause and its target share a cue token, and a distractor
utterance farther than ``max_cause_distance`` repeats the cue.
"""
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..exceptions import ConfigurationError
from ..model.posgraph import relative_distance
from .models import NEUTRAL, Conversation

EMOTIONS = ("happiness", "sadness", "anger", "surprise", "fear", "disgust")
SPEAKER_NAMES = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


class SyntheticSpec(BaseModel):
    """Parameters of a planted synthetic corpus; the corpus is a pure function of these."""
    conversations: int = Field(default=64, ge=0, description="Number of conversations")
    min_utterances: int = Field(default=8, ge=2, description="Shortest conversation")
    max_utterances: int = Field(default=14, ge=2, description="Longest conversation")
    speakers: int = Field(default=2, ge=1, le=len(SPEAKER_NAMES), description="Distinct speakers per conversation")
    switch_rate: float = Field(
        default=1.0, ge=0, le=1, description="Probability that the next turn changes speaker (1.0 alternates)"
    )
    emotion_rate: float = Field(default=0.5, gt=0, le=1, description="Share of eligible utterances that are targets")
    placement: Literal["relation", "offset", "sampled"] = Field(
        default="relation", description="How a target's cause is placed"
    )
    cause_distance: int = Field(
        default=2, ge=1, description="Relative distance (relation) or utterance offset (offset) of the cause"
    )
    max_cause_distance: int = Field(
        default=3, ge=1, description="Largest sampled offset; distractors sit beyond this relative distance"
    )
    distance_decay: float = Field(default=0.5, gt=0, le=1, description="Weight ratio between consecutive sampled offsets")
    vocab_size: int = Field(default=200, ge=1, description="Filler token vocabulary size")
    min_tokens: int = Field(default=4, ge=1, description="Fewest filler tokens per utterance")
    max_tokens: int = Field(default=8, ge=1, description="Most filler tokens per utterance")
    cue_rate: float = Field(default=0.5, ge=0, le=1, description="Probability a cause shares a cue token with its target")
    cues: int = Field(default=8, ge=1, description="Number of distinct cue tokens")
    distractor_rate: float = Field(default=0.0, ge=0, le=1, description="Probability a cue is repeated by a far utterance")
    seed: int = Field(default=0, ge=0, description="Generator seed")

    @model_validator(mode="after")
    def _check_ranges(self) -> "SyntheticSpec":
        if self.min_utterances > self.max_utterances:
            raise ValueError("min_utterances must not exceed max_utterances")
        if self.min_tokens > self.max_tokens:
            raise ValueError("min_tokens must not exceed max_tokens")
        return self


def _speaker_sequence(rng: np.random.Generator, spec: SyntheticSpec, k: int) -> List[str]:
    names = list(SPEAKER_NAMES[: spec.speakers])
    current = 0
    sequence = [names[0]]
    for _ in range(1, k):
        if len(names) > 1 and rng.random() < spec.switch_rate:
            if len(names) == 2:
                current = 1 - current
            else:
                others = [i for i in range(len(names)) if i != current]
                current = int(rng.choice(others))
        sequence.append(names[current])
    return sequence


def _distance(o: int, t: int, speakers: List[str]) -> int:
    """Magnitude of the relative distance of u_o to u_t, doubled."""
    return -relative_distance(o, t, speakers[o - 1], speakers[t - 1]).doubled


def _relation_cause(t: int, speakers: List[str], spec: SyntheticSpec) -> Optional[int]:
    for o in range(t - 1, 0, -1):
        if speakers[o - 1] != speakers[t - 1] and _distance(o, t, speakers) >= 2 * spec.cause_distance:
            return o
    return None


def _offset_cause(rng: np.random.Generator, t: int, spec: SyntheticSpec) -> int:
    if spec.placement == "offset":
        return max(1, t - spec.cause_distance)
    distances = np.arange(1, spec.max_cause_distance + 1)
    weights = spec.distance_decay ** (distances - 1)
    return max(1, t - int(rng.choice(distances, p=weights / weights.sum())))


def generate_synthetic(spec: SyntheticSpec) -> List[Conversation]:
    """Generate a planted-cause corpus; the same spec always yields the same corpus."""
    if not isinstance(spec, SyntheticSpec):
        raise ConfigurationError("generate_synthetic expects a SyntheticSpec")
    rng = np.random.default_rng(spec.seed)
    conversations: List[Conversation] = []

    for n in range(spec.conversations):
        k = int(rng.integers(spec.min_utterances, spec.max_utterances + 1))
        speakers = _speaker_sequence(rng, spec, k)
        tokens = [
            [f"w{int(j)}" for j in rng.integers(0, spec.vocab_size, size=int(rng.integers(spec.min_tokens, spec.max_tokens + 1)))]
            for _ in range(k)
        ]
        emotions = [NEUTRAL] * k

        if spec.placement == "relation":
            planted = {t: _relation_cause(t, speakers, spec) for t in range(2, k + 1)}
            eligible = [t for t, o in planted.items() if o is not None]
        else:
            planted = {}
            eligible = list(range(2, k + 1))
        targets = [t for t in eligible if rng.random() < spec.emotion_rate]
        if not targets and eligible:
            targets = [eligible[-1]]

        causes = {}
        for t in targets:
            emotions[t - 1] = str(rng.choice(EMOTIONS))
            cause = planted[t] if spec.placement == "relation" else _offset_cause(rng, t, spec)
            causes[t] = [cause]
            if rng.random() < spec.cue_rate:
                cue = f"cue{int(rng.integers(0, spec.cues))}"
                tokens[t - 1].append(cue)
                tokens[cause - 1].append(cue)
                far = [o for o in range(1, t) if o != cause and _distance(o, t, speakers) > 2 * spec.max_cause_distance]
                if far and rng.random() < spec.distractor_rate:
                    tokens[int(rng.choice(far)) - 1].append(cue)

        conversations.append(
            Conversation.model_validate(
                {
                    "id": f"syn{spec.seed}_{n:04d}",
                    "utterances": [
                        {"idx": i + 1, "speaker": speakers[i], "text": " ".join(tokens[i]), "emotion": emotions[i]}
                        for i in range(k)
                    ],
                    "causes": causes,
                }
            )
        )
    return conversations


def shuffle_labels(conversations: List[Conversation], seed: int) -> List[Conversation]:
    """Label-randomized control: each target keeps its cause count but causes move to random positions <= t."""
    rng = np.random.default_rng(seed)
    shuffled = []
    for conv in conversations:
        causes = {}
        for t, gold in sorted(conv.gold_causes.items()):
            picks = rng.choice(np.arange(1, t + 1), size=min(len(gold), t), replace=False)
            causes[t] = sorted(int(c) for c in picks)
        shuffled.append(conv.model_copy(update={"gold_causes": causes, "pairs": None}))
    return shuffled

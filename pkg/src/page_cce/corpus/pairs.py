"""
Candidate-pair enumeration and corpus statistics.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List

from ..exceptions import CorpusError
from ..types import CandidatePair
from .models import Conversation


def enumerate_pairs(conv: Conversation) -> List[CandidatePair]:
    """One pair per (o, t) with o <= t and u_t non-neutral; t ascending, then o ascending.

    Self-pairs (o == t) are included.
    """
    return [
        CandidatePair(conversation_id=conv.id, o=o, t=t, label=conv.is_cause(o, t))
        for t in conv.targets
        for o in range(1, t + 1)
    ]


def candidate_pairs(conv: Conversation) -> List[CandidatePair]:
    """The pairs a model should classify: the dataset's explicit list when given, else enumeration."""
    if conv.pairs is None:
        return enumerate_pairs(conv)
    ordered = sorted(conv.pairs, key=lambda p: (p[1], p[0]))
    return [CandidatePair(conversation_id=conv.id, o=o, t=t, label=bool(label)) for o, t, label in ordered]


def validate_pairs(conv: Conversation) -> None:
    """Strict mode: explicit pairs must be a subset of the enumerated pairs, with matching labels."""
    if conv.pairs is None:
        return
    enumerated = {(p.o, p.t): p.label for p in enumerate_pairs(conv)}
    for o, t, label in conv.pairs:
        if (o, t) not in enumerated:
            raise CorpusError(f"pair ({o}, {t}) is not an enumerable candidate", conversation_id=conv.id)
        if enumerated[(o, t)] != bool(label):
            raise CorpusError(
                f"pair ({o}, {t}) labeled {bool(label)} but gold causes say {enumerated[(o, t)]}",
                conversation_id=conv.id,
            )


@dataclass(frozen=True)
class CorpusStats:
    """Counts reported for a corpus split."""
    conversations: int
    utterances: int
    positive_pairs: int
    negative_pairs: int

    @property
    def avg_length(self) -> float:
        return self.utterances / self.conversations if self.conversations else 0.0

    @property
    def positive_rate(self) -> float:
        total = self.positive_pairs + self.negative_pairs
        return self.positive_pairs / total if total else 0.0

    def to_dict(self) -> Dict[str, float]:
        return {
            "conversations": self.conversations,
            "utterances": self.utterances,
            "avg_length": round(self.avg_length, 2),
            "positive_pairs": self.positive_pairs,
            "negative_pairs": self.negative_pairs,
        }


def corpus_stats(conversations: Iterable[Conversation]) -> CorpusStats:
    n_conv = n_utt = pos = neg = 0
    for conv in conversations:
        n_conv += 1
        n_utt += conv.k
        for pair in candidate_pairs(conv):
            if pair.label:
                pos += 1
            else:
                neg += 1
    return CorpusStats(conversations=n_conv, utterances=n_utt, positive_pairs=pos, negative_pairs=neg)

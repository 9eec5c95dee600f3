"""
Core value types for the page_cce library.

Conversations and utterances live in ``page_cce.corpus.models`` (they are
validated on ingestion); the types here are produced by the model and the
harness.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .exceptions import MetricsError


@dataclass(frozen=True)
class CandidatePair:
    """A (candidate o, target t) pair to classify; indices are 1-based."""
    conversation_id: str
    o: int
    t: int
    label: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "conversation_id": self.conversation_id,
            "o": self.o,
            "t": self.t,
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CandidatePair":
        return cls(
            conversation_id=str(data["conversation_id"]),
            o=int(data["o"]),
            t=int(data["t"]),
            label=bool(data["label"]),
        )


@dataclass(frozen=True)
class PairPrediction:
    """Model output for one candidate pair."""
    pair: CandidatePair
    probability: float
    predicted: bool

    def to_row(self) -> Dict[str, Any]:
        return {
            "conv_id": self.pair.conversation_id,
            "o": self.pair.o,
            "t": self.pair.t,
            "p": repr(self.probability),
            "label": int(self.pair.label),
            "predicted": int(self.predicted),
        }


@dataclass(frozen=True)
class MetricsReport:
    """Confusion counts and the Pos/Neg/Macro F1 columns for one evaluation set."""
    tp: int
    fp: int
    fn: int
    tn: int
    pos_f1: float
    neg_f1: float
    macro_f1: float
    dataset: str = ""

    def __post_init__(self):
        for name in ("pos_f1", "neg_f1", "macro_f1"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise MetricsError(f"{name} must lie in [0, 1], got {value}")
        if not math.isclose(self.macro_f1, (self.pos_f1 + self.neg_f1) / 2.0, abs_tol=1e-12):
            raise MetricsError(
                f"macro_f1 {self.macro_f1} is not the mean of pos_f1 {self.pos_f1} and neg_f1 {self.neg_f1}"
            )

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dataset": self.dataset,
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "tn": self.tn,
            "neg_f1": self.neg_f1,
            "pos_f1": self.pos_f1,
            "macro_f1": self.macro_f1,
        }

    def summary(self) -> str:
        """Neg/Pos/Macro F1 in percent, the usual reporting order."""
        return (
            f"Neg F1 {self.neg_f1 * 100:.2f}  Pos F1 {self.pos_f1 * 100:.2f}  "
            f"Macro F1 {self.macro_f1 * 100:.2f}"
        )


@dataclass
class EpochRecord:
    """One line of the training log."""
    epoch: int
    loss: float
    val: Optional[MetricsReport] = None

    def to_row(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {"epoch": self.epoch, "loss": repr(self.loss)}
        if self.val is not None:
            row.update(
                val_pos_f1=repr(self.val.pos_f1),
                val_neg_f1=repr(self.val.neg_f1),
                val_macro_f1=repr(self.val.macro_f1),
            )
        return row


@dataclass
class StopDecision:
    """Decision about whether training should stop early."""
    should_stop: bool
    reason: str
    stopped_by: str  # "patience", "max_epochs", "none"


@dataclass
class SeedSummary:
    """Mean and standard deviation of Macro F1 over several seeded runs."""
    label: str
    reports: List[MetricsReport] = field(default_factory=list)

    @property
    def macro_scores(self) -> List[float]:
        return [r.macro_f1 for r in self.reports]

    @property
    def mean(self) -> float:
        scores = self.macro_scores
        return float(np.mean(scores)) if scores else 0.0

    @property
    def std(self) -> float:
        scores = self.macro_scores
        if len(scores) < 2:
            return 0.0
        return float(np.std(scores, ddof=1))

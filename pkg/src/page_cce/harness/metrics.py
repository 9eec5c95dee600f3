"""
Pair classification metrics.

Pos F1 treats causal pairs as the positive class, Neg F1 treats non-causal
pairs as the positive class, and Macro F1 is their unweighted mean. An F1
whose denominator is zero (no true, predicted or missed members of the class)
is reported as 0.0.
"""
from typing import Iterable, Sequence, Tuple

from sklearn.metrics import confusion_matrix, f1_score

from ..exceptions import MetricsError
from ..types import MetricsReport, PairPrediction


def confusion_counts(predicted: Sequence[bool], labels: Sequence[bool]) -> Tuple[int, int, int, int]:
    """(TP, FP, FN, TN) with label 1 as the positive class."""
    if len(predicted) != len(labels):
        raise MetricsError(f"{len(predicted)} predictions for {len(labels)} labels")
    tn, fp, fn, tp = confusion_matrix(
        [bool(y) for y in labels], [bool(p) for p in predicted], labels=[False, True]
    ).ravel()
    return int(tp), int(fp), int(fn), int(tn)


def f1_scores(predicted: Sequence[bool], labels: Sequence[bool], dataset: str = "") -> MetricsReport:
    """Pos/Neg/Macro F1 of hard predictions against gold labels."""
    if not predicted:
        raise MetricsError("cannot score an empty prediction set")
    tp, fp, fn, tn = confusion_counts(predicted, labels)
    pos, neg = f1_score(
        [bool(y) for y in labels],
        [bool(p) for p in predicted],
        labels=[True, False],
        average=None,
        zero_division=0,
    )
    pos, neg = float(pos), float(neg)
    return MetricsReport(
        tp=tp, fp=fp, fn=fn, tn=tn, pos_f1=pos, neg_f1=neg, macro_f1=(pos + neg) / 2.0, dataset=dataset
    )


def score_predictions(predictions: Iterable[PairPrediction], dataset: str = "") -> MetricsReport:
    predictions = list(predictions)
    return f1_scores([p.predicted for p in predictions], [p.pair.label for p in predictions], dataset=dataset)

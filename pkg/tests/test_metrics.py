"""
Tests for Pos/Neg/Macro F1.
"""
import pytest

from page_cce.exceptions import MetricsError
from page_cce.harness import confusion_counts, f1_scores, score_predictions
from page_cce.types import CandidatePair, MetricsReport, PairPrediction


def make_prediction(label: bool, predicted: bool, o: int = 1, t: int = 1) -> PairPrediction:
    """Helper to create a scored pair."""
    return PairPrediction(
        pair=CandidatePair(conversation_id="c", o=o, t=t, label=label),
        probability=0.9 if predicted else 0.1,
        predicted=predicted,
    )


def make_outcomes(tp: int = 0, fp: int = 0, fn: int = 0, tn: int = 0):
    """Helper to build (predicted, labels) lists with the given confusion counts."""
    predicted = [True] * tp + [True] * fp + [False] * fn + [False] * tn
    labels = [True] * tp + [False] * fp + [True] * fn + [False] * tn
    return predicted, labels


class TestConfusionCounts:
    """Counting."""

    def test_counts(self):
        """Each outcome lands in its cell."""
        predicted = [True, True, False, False, True]
        labels = [True, False, True, False, True]
        assert confusion_counts(predicted, labels) == (2, 1, 1, 1)

    def test_length_mismatch(self):
        """Predictions and labels must align."""
        with pytest.raises(MetricsError):
            confusion_counts([True], [True, False])


class TestF1:
    """F1 values."""

    def test_small_example(self):
        """TP=2, FP=1, FN=1 gives Pos F1 2/3."""
        report = f1_scores(*make_outcomes(tp=2, fp=1, fn=1, tn=4))
        assert report.pos_f1 == pytest.approx(2 / 3)
        assert report.neg_f1 == pytest.approx(0.8)

    def test_zero_denominator(self):
        """No positives anywhere gives Pos F1 0.0."""
        report = f1_scores(*make_outcomes(tn=3))
        assert report.pos_f1 == 0.0
        assert report.neg_f1 == 1.0

    def test_reported_scale_counts(self):
        """Counts at benchmark scale reproduce the expected scores."""
        report = f1_scores(*make_outcomes(tp=1000, fp=600, fn=511, tn=4379))
        assert (report.tp, report.fp, report.fn, report.tn) == (1000, 600, 511, 4379)
        assert report.pos_f1 == pytest.approx(0.64288, abs=1e-5)
        assert report.neg_f1 == pytest.approx(0.88742, abs=1e-5)
        assert report.macro_f1 == pytest.approx(0.76515, abs=1e-5)

    def test_all_negative_predictions(self):
        """Predicting nothing positive gives Pos F1 0 and a perfect-ish Neg F1."""
        report = f1_scores([False] * 4, [True, False, False, False])
        assert report.pos_f1 == 0.0
        assert report.neg_f1 == pytest.approx(2 * 3 / (2 * 3 + 1))
        assert report.macro_f1 == pytest.approx(report.neg_f1 / 2)

    def test_perfect(self):
        """Perfect predictions score 1.0 everywhere."""
        report = f1_scores([True, False], [True, False])
        assert (report.pos_f1, report.neg_f1, report.macro_f1) == (1.0, 1.0, 1.0)

    def test_empty(self):
        """Scoring nothing is an error."""
        with pytest.raises(MetricsError):
            f1_scores([], [])

    def test_score_predictions(self):
        """Scoring PairPredictions uses their hard decisions and gold labels."""
        predictions = [make_prediction(True, True), make_prediction(False, True, o=2), make_prediction(True, False, o=3)]
        report = score_predictions(predictions, dataset="val")
        assert (report.tp, report.fp, report.fn, report.tn) == (1, 1, 1, 0)
        assert report.dataset == "val"


class TestMetricsReport:
    """Report invariants."""

    def test_macro_must_be_mean(self):
        """An inconsistent macro score is rejected."""
        with pytest.raises(MetricsError):
            MetricsReport(tp=1, fp=0, fn=0, tn=1, pos_f1=1.0, neg_f1=1.0, macro_f1=0.5)

    def test_summary(self):
        """Summary lists Neg, Pos and Macro in percent."""
        report = f1_scores(*make_outcomes(tp=1, fp=1, fn=1, tn=1))
        assert report.summary() == "Neg F1 50.00  Pos F1 50.00  Macro F1 50.00"

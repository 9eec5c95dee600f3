"""
Tests for multi-seed experiments.

The planted-corpus experiments train many models and are marked ``slow``;
run them with ``pytest -m slow``.
"""
import csv

import pytest
from pydantic import ValidationError

from page_cce.config import ClassifierConfig, EncoderConfig, GraphConfig, OptimizerConfig, PageConfig, TrainConfig
from page_cce.corpus import SyntheticSpec, generate_synthetic, shuffle_labels
from page_cce.exceptions import ConfigurationError
from page_cce.harness import (
    AblationResult,
    evaluate,
    run_ablation,
    run_once,
    train,
    window_sweep,
    with_overrides,
    write_sweep_csv,
)
from page_cce.types import MetricsReport, SeedSummary


def make_config(epochs: int = 1, d_u: int = 8, **train) -> PageConfig:
    """Helper to create a small configuration."""
    return PageConfig(
        encoder=EncoderConfig(d_u=d_u, d_e=4, heads=2, buckets=256, base_dim=16, mlp_hidden=d_u),
        graph=GraphConfig(window=2),
        classifier=ClassifierConfig(hidden=d_u),
        optimizer=OptimizerConfig(lr=1e-2),
        train=TrainConfig(epochs=epochs, batch_size=4, patience=None, **train),
    )


def make_corpus(n: int = 8, seed: int = 0, **spec):
    return generate_synthetic(SyntheticSpec(conversations=n, min_utterances=4, max_utterances=6, seed=seed, **spec))


def make_report(macro: float) -> MetricsReport:
    return MetricsReport(tp=0, fp=0, fn=0, tn=0, pos_f1=macro, neg_f1=macro, macro_f1=macro)


class TestWithOverrides:
    """Config copies."""

    def test_applies_and_validates(self):
        """Overrides land in their section and are validated."""
        config = with_overrides(make_config(), graph__window=5, train__seed=7)
        assert config.graph.window == 5
        assert config.train.seed == 7
        with pytest.raises(ValidationError):
            with_overrides(make_config(), graph__window=0)


class TestAblationResult:
    """Gap and row export."""

    def test_gap_and_rows(self):
        """gap is the difference of mean Macro F1."""
        result = AblationResult(
            full=SeedSummary("full", [make_report(0.8), make_report(0.6)]),
            ablated=SeedSummary("w/o PaG", [make_report(0.5), make_report(0.5)]),
        )
        assert result.gap == pytest.approx(0.2)
        rows = result.to_rows()
        assert [r["variant"] for r in rows] == ["full", "full", "w/o PaG", "w/o PaG"]
        assert result.full.std == pytest.approx(0.14142135623730953)

    def test_requires_seeds(self):
        """An ablation needs at least one seed."""
        with pytest.raises(ConfigurationError):
            run_ablation(make_corpus(), make_config(), seeds=[])


class TestSweep:
    """Window sweep bookkeeping."""

    def test_rows_sorted_and_written(self, tmp_path):
        """Windows are deduplicated and sorted; one CSV row each."""
        rows = window_sweep(make_corpus(), make_config(), windows=[3, 1, 3], seeds=[0])
        assert [r.window for r in rows] == [1, 3]
        assert all(len(r.summary.reports) == 1 for r in rows)
        path = tmp_path / "sweep.csv"
        write_sweep_csv(rows, path)
        with path.open() as f:
            written = list(csv.DictReader(f))
        assert [r["window"] for r in written] == ["1", "3"]

    def test_requires_windows(self):
        """An empty window list is rejected."""
        with pytest.raises(ConfigurationError):
            window_sweep(make_corpus(), make_config(), windows=[], seeds=[0])

    def test_run_once_is_deterministic(self):
        """One seeded run is reproducible."""
        convs = make_corpus()
        assert run_once(make_config(), convs) == run_once(make_config(), convs)


@pytest.mark.slow
class TestPlantedCorpora:
    """Learning behavior on planted corpora."""

    def test_capacity(self):
        """With shared cue tokens the full model fits its training set."""
        convs = make_corpus(16, cue_rate=1.0, cause_distance=1)
        config = make_config(epochs=200, d_u=32, val_fraction=0.0)
        result = train(convs, config)
        assert evaluate(result.model, convs).report.pos_f1 >= 0.95

    def test_graph_stage_helps_on_positional_causes(self):
        """Without cue tokens only position identifies the cause."""
        train_convs = make_corpus(48, cue_rate=0.0, cause_distance=1)
        eval_convs = make_corpus(16, seed=1, cue_rate=0.0, cause_distance=1)
        result = run_ablation(
            train_convs, make_config(epochs=30, d_u=16), seeds=[0, 1, 2, 3, 4], eval_convs=eval_convs
        )
        assert result.gap >= 0.05

    def test_label_shuffled_null(self):
        """On label-randomized data the graph stage buys nothing."""
        train_convs = shuffle_labels(make_corpus(48, cue_rate=0.0), seed=0)
        eval_convs = shuffle_labels(make_corpus(16, seed=1, cue_rate=0.0), seed=1)
        result = run_ablation(train_convs, make_config(epochs=10, d_u=16), seeds=[0, 1], eval_convs=eval_convs)
        assert abs(result.gap) < 0.15

    def test_window_sweep_shape(self):
        """Causes two relative steps back: w=3 resolves them, w=1 cannot, w=5 adds unused relations."""
        spec = dict(min_utterances=8, max_utterances=12, cue_rate=0.0, cause_distance=2)
        train_convs = generate_synthetic(SyntheticSpec(conversations=48, seed=0, **spec))
        eval_convs = generate_synthetic(SyntheticSpec(conversations=16, seed=1, **spec))
        config = with_overrides(make_config(epochs=20, d_u=16), graph__c_mode="degree")
        rows = window_sweep(train_convs, config, windows=[1, 3, 5], seeds=[0, 1, 2, 3, 4], eval_convs=eval_convs)
        means = {r.window: r.summary.mean for r in rows}
        assert means[3] > means[1]
        assert means[3] > means[5]

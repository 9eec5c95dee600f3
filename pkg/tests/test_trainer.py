"""
Tests for the training loop.
"""
import numpy as np
import pytest

import page_cce.harness.trainer as trainer_module
from page_cce.config import ClassifierConfig, EncoderConfig, GraphConfig, OptimizerConfig, PageConfig, TrainConfig
from page_cce.corpus import Conversation, SyntheticSpec, generate_synthetic
from page_cce.exceptions import CorpusError, TrainingDivergedError
from page_cce.harness import evaluate, train
from page_cce.logging import RunLogger
from page_cce.model import PageModel
from page_cce.numerics import Tensor


def make_config(epochs: int = 3, **train) -> PageConfig:
    """Helper to create a small, fast configuration."""
    return PageConfig(
        encoder=EncoderConfig(d_u=8, d_e=4, heads=2, buckets=64, base_dim=8, mlp_hidden=8),
        graph=GraphConfig(window=2),
        classifier=ClassifierConfig(hidden=8),
        optimizer=OptimizerConfig(lr=1e-2),
        train=TrainConfig(epochs=epochs, batch_size=4, patience=None, **train),
    )


def make_corpus(n: int = 8, seed: int = 0):
    return generate_synthetic(SyntheticSpec(conversations=n, min_utterances=4, max_utterances=6, seed=seed))


class TestTrain:
    """The training loop."""

    def test_zero_epochs_leaves_parameters(self):
        """epochs=0 returns the freshly initialized model."""
        convs = make_corpus()
        config = make_config(epochs=0)
        result = train(convs, config)
        fresh = PageModel.for_corpus(config, convs)
        assert result.history == []
        assert result.best_epoch is None
        for name, values in fresh.state_dict().items():
            np.testing.assert_array_equal(result.model.state_dict()[name], values)

    def test_deterministic(self):
        """The same configuration reproduces the same losses and weights."""
        convs = make_corpus()
        a = train(convs, make_config())
        b = train(convs, make_config())
        assert [r.loss for r in a.history] == [r.loss for r in b.history]
        for name, values in a.model.state_dict().items():
            np.testing.assert_array_equal(b.model.state_dict()[name], values)

    def test_loss_decreases(self):
        """Training lowers the loss on a small planted corpus."""
        result = train(make_corpus(), make_config(epochs=15))
        assert len(result.history) == 15
        assert result.history[-1].loss < result.history[0].loss
        assert result.stop.stopped_by == "max_epochs"

    def test_ablated_training_runs(self):
        """The w/o PaG variant trains through the same loop."""
        result = train(make_corpus(), make_config(epochs=2, ablate_pag=True))
        assert result.model.ablated
        assert len(result.history) == 2

    def test_best_validation_state_restored(self):
        """With validation data the returned weights are the best epoch's."""
        convs = make_corpus(12)
        val = make_corpus(4, seed=1)
        result = train(convs, make_config(epochs=5), val_convs=val)
        best = result.history[result.best_epoch - 1]
        assert evaluate(result.model, val).report.macro_f1 == best.val.macro_f1

    def test_no_candidate_pairs(self):
        """A corpus with no targets cannot be trained on."""
        conv = Conversation(id="n", utterances=[{"idx": 1, "speaker": "A", "text": "hi", "emotion": "neutral"}])
        with pytest.raises(CorpusError):
            train([conv], make_config())

    def test_non_finite_loss(self, monkeypatch):
        """A NaN loss aborts training with the offending batch."""
        monkeypatch.setattr(trainer_module, "batch_loss", lambda model, batch: Tensor(np.nan))
        with pytest.raises(TrainingDivergedError) as exc_info:
            train(make_corpus(), make_config())
        assert exc_info.value.epoch == 1
        assert exc_info.value.batch_index == 0
        assert exc_info.value.conversation_ids

    def test_run_logger_records_epochs(self, tmp_path):
        """Epoch lines land in the run log."""
        run_logger = RunLogger("t", log_dir=tmp_path, console_output=False)
        train(make_corpus(), make_config(epochs=2), run_logger=run_logger)
        run_logger.close()
        log = (tmp_path / "run.log").read_text()
        assert "Epoch 1/2" in log
        assert "Training Complete" in log

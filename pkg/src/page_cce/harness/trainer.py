"""
Training loop and evaluation.

One optimizer step per batch of conversations: every candidate pair of the
batch contributes to a single mean binary cross-entropy. Shuffling, parameter
initialization and therefore the whole run are a pure function of the
configuration (including ``train.seed``).
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..config import PageConfig
from ..corpus.models import Conversation
from ..corpus.pairs import candidate_pairs
from ..exceptions import CorpusError, TrainingDivergedError
from ..logging import RunLogger
from ..model import BaseEncoder, EmotionVocab, PageModel, bce_loss
from ..numerics import Tensor, backward, concat, create_optimizer, reshape
from ..types import EpochRecord, MetricsReport, PairPrediction, StopDecision
from .convergence import best_epoch, decide_stop
from .metrics import score_predictions

logger = logging.getLogger(__name__)


@dataclass
class Evaluation:
    report: MetricsReport
    predictions: List[PairPrediction]


@dataclass
class TrainingResult:
    """Trained model (best validation state when validation data was given) and its history."""
    model: PageModel
    history: List[EpochRecord] = field(default_factory=list)
    best_epoch: Optional[int] = None
    stop: StopDecision = field(
        default_factory=lambda: StopDecision(should_stop=True, reason="No epochs requested", stopped_by="max_epochs")
    )


def evaluate(model: PageModel, conversations: Sequence[Conversation], dataset: str = "") -> Evaluation:
    """Predict every candidate pair of ``conversations`` and score the predictions."""
    predictions = model.predict(conversations)
    return Evaluation(report=score_predictions(predictions, dataset=dataset), predictions=predictions)


def batch_loss(model: PageModel, batch: Sequence[Conversation]) -> Tensor:
    """Mean BCE over all candidate pairs of a batch."""
    outputs: List[Tensor] = []
    labels: List[float] = []
    for conv in batch:
        pairs, probabilities = model.forward(conv)
        if not pairs:
            continue
        outputs.append(reshape(probabilities, (len(pairs), 1)))
        labels.extend(1.0 if p.label else 0.0 for p in pairs)
    return bce_loss(concat(outputs, axis=0), labels, pos_weight=model.config.classifier.pos_weight)


def train(
    train_convs: Sequence[Conversation],
    config: PageConfig,
    val_convs: Optional[Sequence[Conversation]] = None,
    run_logger: Optional[RunLogger] = None,
    base: Optional[BaseEncoder] = None,
) -> TrainingResult:
    """
    Train a PageModel.

    Args:
        train_convs: Training conversations; those without candidate pairs are skipped
        config: Resolved configuration
        val_convs: Optional validation conversations for early stopping and best-state selection
        run_logger: Optional run logger for epoch records
        base: Optional base encoder overriding the configured one

    Returns:
        TrainingResult with the model and per-epoch records

    Raises:
        CorpusError: If no training conversation has a candidate pair
        TrainingDivergedError: If a batch loss is not finite
    """
    trainable = [c for c in train_convs if candidate_pairs(c)]
    if not trainable:
        raise CorpusError("training corpus has no candidate pairs")
    val_convs = [c for c in (val_convs or []) if candidate_pairs(c)]

    tc = config.train
    model = PageModel(config, EmotionVocab.from_conversations(train_convs), base=base)
    optimizer = create_optimizer(model.parameters(), config.optimizer)
    order_rng = np.random.default_rng([tc.seed, 1])
    result = TrainingResult(model=model)

    if run_logger:
        run_logger.section(f"Training ({'w/o PaG' if model.ablated else 'full'}, seed {tc.seed})")
        run_logger.info(
            f"{len(trainable)} training conversations, {len(val_convs)} validation, "
            f"{model.parameter_count()} parameters"
        )

    best_state: Optional[Dict[str, np.ndarray]] = None
    for epoch in range(1, tc.epochs + 1):
        order = order_rng.permutation(len(trainable))
        total, pairs_seen = 0.0, 0
        for batch_index, start in enumerate(range(0, len(order), tc.batch_size)):
            batch = [trainable[int(i)] for i in order[start:start + tc.batch_size]]
            loss = batch_loss(model, batch)
            value = loss.item()
            if not np.isfinite(value):
                raise TrainingDivergedError(epoch, batch_index, value, [c.id for c in batch])
            backward(loss)
            optimizer.step()
            n = sum(len(candidate_pairs(c)) for c in batch)
            total += value * n
            pairs_seen += n

        val = evaluate(model, val_convs, dataset="val").report if val_convs else None
        record = EpochRecord(epoch=epoch, loss=total / pairs_seen, val=val)
        result.history.append(record)
        if run_logger:
            run_logger.log_epoch(record, tc.epochs)
        logger.debug("epoch %d loss %.6f", epoch, record.loss)

        if val is not None and best_epoch(result.history) == epoch:
            best_state = model.state_dict()

        decision = decide_stop(result.history, tc.epochs, tc.patience)
        result.stop = decision
        if decision.should_stop:
            break

    result.best_epoch = best_epoch(result.history)
    if best_state is not None:
        model.load_state_dict(best_state)
    if run_logger and result.history:
        run_logger.log_final_result(result.best_epoch or 0, result.stop.stopped_by, result.stop.reason)
    return result

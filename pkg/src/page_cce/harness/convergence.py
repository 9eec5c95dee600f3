"""
Stop conditions for the training loop.

Evaluated after every epoch, in priority order:
- Maximum epochs reached
- No validation Macro F1 gain for ``patience`` epochs

The logic only looks at the epoch history, so it can be tested without a model.
"""
from typing import List, Optional

from ..types import EpochRecord, StopDecision


def best_epoch(history: List[EpochRecord]) -> Optional[int]:
    """Epoch with the highest validation Macro F1; the earliest wins ties.

    Without validation scores the last epoch is the best one.
    """
    scored = [r for r in history if r.val is not None]
    if not scored:
        return history[-1].epoch if history else None
    best = scored[0]
    for record in scored[1:]:
        if record.val.macro_f1 > best.val.macro_f1:
            best = record
    return best.epoch


def decide_stop(history: List[EpochRecord], max_epochs: int, patience: Optional[int]) -> StopDecision:
    """
    Decide whether training should stop after the last recorded epoch.

    Args:
        history: Completed epochs, in order
        max_epochs: Epoch budget
        patience: Epochs without improvement to tolerate (None disables early stopping)

    Returns:
        StopDecision indicating whether to stop and why
    """
    if not history:
        return StopDecision(should_stop=False, reason="No epochs completed yet", stopped_by="none")

    current = history[-1]

    # Check 1: epoch budget
    if current.epoch >= max_epochs:
        return StopDecision(
            should_stop=True,
            reason=f"Max epochs reached ({max_epochs})",
            stopped_by="max_epochs",
        )

    # Check 2: patience on validation Macro F1
    best = best_epoch(history)
    if patience is not None and current.val is not None and best is not None:
        stale = current.epoch - best
        if stale >= patience:
            return StopDecision(
                should_stop=True,
                reason=f"No validation Macro F1 gain for {stale} epochs (best epoch {best})",
                stopped_by="patience",
            )

    return StopDecision(should_stop=False, reason=f"Best epoch so far: {best}", stopped_by="none")

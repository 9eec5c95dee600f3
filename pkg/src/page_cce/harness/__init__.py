"""
Training, evaluation and experiment harness.
"""
from .metrics import confusion_counts, f1_scores, score_predictions
from .convergence import best_epoch, decide_stop
from .trainer import Evaluation, TrainingResult, batch_loss, evaluate, train
from .experiments import (
    AblationResult,
    SweepRow,
    run_ablation,
    run_once,
    window_sweep,
    with_overrides,
    write_sweep_csv,
)
from .storage import RunManifest, RunStorage, file_sha256

__all__ = [
    # Metrics
    "confusion_counts",
    "f1_scores",
    "score_predictions",
    # Early stopping
    "best_epoch",
    "decide_stop",
    # Training
    "Evaluation",
    "TrainingResult",
    "batch_loss",
    "evaluate",
    "train",
    # Experiments
    "AblationResult",
    "SweepRow",
    "run_once",
    "run_ablation",
    "window_sweep",
    "with_overrides",
    "write_sweep_csv",
    # Storage
    "RunManifest",
    "RunStorage",
    "file_sha256",
]

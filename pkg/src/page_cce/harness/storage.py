"""
Run directory layout and artifact persistence.

A run directory holds::

    manifest.json      resolved config, seed, corpus checksum, artifact paths (written first)
    run.log            RunLogger output
    checkpoint.json    model parameters + config metadata
    training_log.csv   epoch, loss, validation F1s
    metrics.csv        one row per scored dataset
    predictions.csv    one row per candidate pair
"""
import csv
import hashlib
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, Field

from .. import __version__
from ..config import PageConfig
from ..corpus.synthetic import SyntheticSpec
from ..model import PageModel, write_predictions
from ..types import EpochRecord, MetricsReport, PairPrediction

METRICS_COLUMNS = ["dataset", "tp", "fp", "fn", "tn", "neg_f1", "pos_f1", "macro_f1"]
TRAINING_LOG_COLUMNS = ["epoch", "loss", "val_pos_f1", "val_neg_f1", "val_macro_f1"]


class RunManifest(BaseModel):
    """Everything needed to rerun a command exactly."""
    command: str = Field(description="Subcommand that produced the run")
    version: str = Field(default=__version__, description="page-cce version")
    created_at: str = Field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"))
    seed: int
    config: Optional[PageConfig] = Field(default=None, description="Resolved model configuration")
    synthetic: Optional[SyntheticSpec] = Field(default=None, description="Generator parameters of a synth run")
    corpus_path: Optional[str] = None
    corpus_format: Optional[str] = None
    corpus_sha256: Optional[str] = None
    artifacts: Dict[str, str] = Field(default_factory=dict, description="Artifact name -> file name in the run dir")


def file_sha256(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


class RunStorage:
    """Handle artifact files of one run directory."""

    def __init__(self, run_dir: Union[str, Path]):
        self.run_dir = Path(run_dir)
        self.run_dir.mkdir(parents=True, exist_ok=True)

    @property
    def manifest_file(self) -> Path:
        return self.run_dir / "manifest.json"

    @property
    def checkpoint_file(self) -> Path:
        return self.run_dir / "checkpoint.json"

    @property
    def metrics_file(self) -> Path:
        return self.run_dir / "metrics.csv"

    @property
    def predictions_file(self) -> Path:
        return self.run_dir / "predictions.csv"

    @property
    def training_log_file(self) -> Path:
        return self.run_dir / "training_log.csv"

    def save_manifest(self, manifest: RunManifest, path: Optional[Path] = None):
        """Save the run manifest (to manifest.json unless another path is given)"""
        (path or self.manifest_file).write_text(manifest.model_dump_json(indent=2), encoding="utf-8")

    def load_manifest(self) -> RunManifest:
        return RunManifest.model_validate_json(self.manifest_file.read_text(encoding="utf-8"))

    def save_checkpoint(self, model: PageModel, extra: Optional[Dict[str, Any]] = None):
        model.save(self.checkpoint_file, extra=extra)

    def save_training_log(self, history: Sequence[EpochRecord]):
        """Save one row per epoch; the header is always written"""
        _write_csv(self.training_log_file, TRAINING_LOG_COLUMNS, [r.to_row() for r in history])

    def save_metrics(self, reports: Sequence[MetricsReport]):
        """Save metrics, one row per dataset"""
        rows = []
        for report in reports:
            row = report.to_dict()
            for name in ("neg_f1", "pos_f1", "macro_f1"):
                row[name] = f"{row[name]:.6f}"
            rows.append(row)
        _write_csv(self.metrics_file, METRICS_COLUMNS, rows)

    def save_predictions(self, predictions: Sequence[PairPrediction]):
        write_predictions(predictions, self.predictions_file)


def _write_csv(path: Path, columns: List[str], rows: Sequence[Dict[str, Any]]) -> None:
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=columns, lineterminator="\n", restval="")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)

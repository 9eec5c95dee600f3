"""
Logging utilities for page_cce runs.

Provides structured logging for training and evaluation runs with:
- Console output (with optional verbosity control)
- File-based logging into the run directory
- Epoch, metrics and final-result records
"""
import logging
import sys
from pathlib import Path
from typing import Optional, Union

from .types import EpochRecord, MetricsReport


class RunLogger:
    """Logger for one training/evaluation run."""

    def __init__(
        self,
        run_id: str,
        log_dir: Optional[Union[str, Path]] = None,
        verbose: bool = False,
        console_output: bool = True,
    ):
        self.run_id = run_id
        self.verbose = verbose
        self.console_output = console_output
        self.log_dir = Path(log_dir) if log_dir else Path("runs") / run_id
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self._setup_file_logger()

    def _setup_file_logger(self):
        """Set up file-based logging."""
        self.logger = logging.getLogger(f"page_cce.run.{self.run_id}")
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False

        for handler in list(self.logger.handlers):
            handler.close()
        self.logger.handlers = []

        file_handler = logging.FileHandler(self.log_dir / "run.log", encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter("%(asctime)s - %(levelname)s - %(message)s"))
        self.logger.addHandler(file_handler)

    def close(self):
        for handler in list(self.logger.handlers):
            handler.close()
        self.logger.handlers = []

    def info(self, message: str):
        """Log info message."""
        self.logger.info(message)
        if self.console_output and self.verbose:
            print(f"  {message}")

    def debug(self, message: str):
        """Log debug message."""
        self.logger.debug(message)
        if self.console_output and self.verbose:
            print(f"    [DEBUG] {message}")

    def warning(self, message: str):
        """Log warning message."""
        self.logger.warning(message)
        if self.console_output:
            print(f"  [WARNING] {message}", file=sys.stderr)

    def error(self, message: str):
        """Log error message."""
        self.logger.error(message)
        if self.console_output:
            print(f"  [ERROR] {message}", file=sys.stderr)

    def section(self, title: str):
        """Log a section header."""
        separator = "=" * 60
        self.logger.info(separator)
        self.logger.info(title)
        self.logger.info(separator)
        if self.console_output and self.verbose:
            print(f"\n{separator}")
            print(f"  {title}")
            print(separator)

    def log_epoch(self, record: EpochRecord, max_epochs: int):
        """Log the loss and validation scores of a finished epoch."""
        msg = f"Epoch {record.epoch}/{max_epochs}: loss={record.loss:.6f}"
        if record.val is not None:
            msg += f" | val {record.val.summary()}"
        self.logger.info(msg)
        if self.console_output and self.verbose:
            print(f"  {msg}")

    def log_metrics(self, report: MetricsReport, label: str = ""):
        """Log a metrics report."""
        name = label or report.dataset or "eval"
        msg = f"[{name}] {report.summary()} (TP={report.tp} FP={report.fp} FN={report.fn} TN={report.tn})"
        self.logger.info(msg)
        if self.console_output and self.verbose:
            print(f"  {msg}")

    def log_final_result(self, best_epoch: int, stopped_by: str, reason: str):
        """Log the final result."""
        self.section("Training Complete")
        self.logger.info(f"Best epoch: {best_epoch}")
        self.logger.info(f"Stopped by: {stopped_by}")
        self.logger.info(f"Reason: {reason}")
        if self.console_output and self.verbose:
            print(f"  Best epoch: {best_epoch}")
            print(f"  Reason: {reason}")


def create_logger(
    run_id: str,
    log_dir: Optional[Union[str, Path]] = None,
    verbose: bool = False,
    console_output: bool = True,
) -> RunLogger:
    """Create a logger for a run."""
    return RunLogger(run_id=run_id, log_dir=log_dir, verbose=verbose, console_output=console_output)

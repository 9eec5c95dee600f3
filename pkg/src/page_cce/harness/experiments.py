"""
Multi-seed experiments: the graph-stage ablation and the window-size sweep.

Each (variant, seed) run holds out a seeded validation split of the training
conversations for early stopping and reports Macro F1 on the evaluation set.
Runs are independent, so they can be spread over worker processes with
``max_workers``; results are identical either way.
"""
import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..config import PageConfig
from ..corpus.models import Conversation
from ..corpus.splits import split_corpus
from ..exceptions import ConfigurationError
from ..types import MetricsReport, SeedSummary
from .trainer import evaluate, train

logger = logging.getLogger(__name__)


def with_overrides(config: PageConfig, **dotted: object) -> PageConfig:
    """Copy of ``config`` with ``section__field=value`` overrides applied."""
    data = config.model_dump()
    for key, value in dotted.items():
        section, _, name = key.partition("__")
        data[section][name] = value
    return PageConfig.model_validate(data)


def run_once(
    config: PageConfig,
    train_convs: Sequence[Conversation],
    eval_convs: Optional[Sequence[Conversation]] = None,
    dataset: str = "eval",
) -> MetricsReport:
    """Train one model and score it on ``eval_convs`` (the validation split when omitted)."""
    kept, held = split_corpus(train_convs, config.train.val_fraction, config.train.seed)
    result = train(kept, config, val_convs=held or None)
    target = eval_convs if eval_convs is not None else held
    if not target:
        target = kept
    return evaluate(result.model, target, dataset=dataset).report


def _run_job(job: Tuple[PageConfig, Sequence[Conversation], Optional[Sequence[Conversation]], str]) -> MetricsReport:
    return run_once(*job)


def _run_all(jobs: List[tuple], max_workers: Optional[int]) -> List[MetricsReport]:
    if max_workers and max_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(_run_job, jobs))
    return [_run_job(job) for job in jobs]


@dataclass
class AblationResult:
    full: SeedSummary
    ablated: SeedSummary

    @property
    def gap(self) -> float:
        """Mean Macro F1 of the full model minus that of the ablated model."""
        return self.full.mean - self.ablated.mean

    def to_rows(self) -> List[Dict[str, object]]:
        rows = []
        for summary in (self.full, self.ablated):
            for seed_index, report in enumerate(summary.reports):
                rows.append({"variant": summary.label, "run": seed_index, **report.to_dict()})
        return rows


def run_ablation(
    train_convs: Sequence[Conversation],
    config: PageConfig,
    seeds: Sequence[int],
    eval_convs: Optional[Sequence[Conversation]] = None,
    max_workers: Optional[int] = None,
) -> AblationResult:
    """Train the full and w/o-PaG variants on the same seeds and data."""
    if not seeds:
        raise ConfigurationError("run_ablation needs at least one seed")
    jobs = []
    for ablate in (False, True):
        for seed in seeds:
            cfg = with_overrides(config, train__seed=seed, train__ablate_pag=ablate)
            jobs.append((cfg, train_convs, eval_convs, "w/o PaG" if ablate else "full"))
    reports = _run_all(jobs, max_workers)
    n = len(seeds)
    result = AblationResult(full=SeedSummary("full", reports[:n]), ablated=SeedSummary("w/o PaG", reports[n:]))
    logger.info(
        "Ablation: full %.4f ± %.4f, w/o PaG %.4f ± %.4f, gap %.4f",
        result.full.mean, result.full.std, result.ablated.mean, result.ablated.std, result.gap,
    )
    return result


@dataclass
class SweepRow:
    window: int
    summary: SeedSummary

    def to_row(self) -> Dict[str, object]:
        return {
            "window": self.window,
            "runs": len(self.summary.reports),
            "mean_macro_f1": repr(self.summary.mean),
            "std_macro_f1": repr(self.summary.std),
        }


def window_sweep(
    train_convs: Sequence[Conversation],
    config: PageConfig,
    windows: Sequence[int],
    seeds: Sequence[int],
    eval_convs: Optional[Sequence[Conversation]] = None,
    max_workers: Optional[int] = None,
) -> List[SweepRow]:
    """Mean Macro F1 per window size; rows sorted by window ascending."""
    if not windows:
        raise ConfigurationError("window_sweep needs at least one window size")
    if not seeds:
        raise ConfigurationError("window_sweep needs at least one seed")
    ordered = sorted(set(windows))
    jobs = [
        (with_overrides(config, graph__window=w, train__seed=seed, train__ablate_pag=False), train_convs, eval_convs, f"w={w}")
        for w in ordered
        for seed in seeds
    ]
    reports = _run_all(jobs, max_workers)
    n = len(seeds)
    rows = [SweepRow(window=w, summary=SeedSummary(f"w={w}", reports[i * n:(i + 1) * n])) for i, w in enumerate(ordered)]
    for row in rows:
        logger.info("Window %d: Macro F1 %.4f ± %.4f", row.window, row.summary.mean, row.summary.std)
    return rows


def write_sweep_csv(rows: Sequence[SweepRow], path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=["window", "runs", "mean_macro_f1", "std_macro_f1"], lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.to_row())

"""
Command-line entry point.

Subcommands:
- train         train a model, write manifest, checkpoint, logs, metrics and predictions
- eval          score a checkpoint on a corpus
- synth         write a planted-cause synthetic corpus
- sweep         Macro F1 per relation window over several seeds
- ablate        full model vs. w/o position-aware graph over several seeds
- export-graph  DOT (or JSON) view of one conversation's position graph
- stats         corpus statistics

Exit status: 0 on success, 2 on usage errors, 1 on data/configuration errors.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, get_args

from dotenv import load_dotenv
from pydantic import ValidationError

from . import __version__
from .config import PageConfig, resolve_config
from .corpus import SyntheticSpec, corpus_stats, generate_synthetic, parse_corpus, split_corpus, write_corpus
from .exceptions import CorpusError, PageError
from .harness import RunManifest, RunStorage, evaluate, file_sha256, run_ablation, train, window_sweep, write_sweep_csv
from .logging import create_logger
from .model import PageModel, build_graph, export_dot, graph_to_dict
from .numerics import load_checkpoint

# CLI flag dest -> dotted config key
FLAG_KEYS: Dict[str, str] = {
    "seed": "train.seed",
    "d_u": "encoder.d_u",
    "d_e": "encoder.d_e",
    "heads": "encoder.heads",
    "base_dim": "encoder.base_dim",
    "encoder": "encoder.mode",
    "learned_qkv": "encoder.learned_qkv",
    "window": "graph.window",
    "layers": "graph.layers",
    "c_norm": "graph.c_mode",
    "epochs": "train.epochs",
    "batch": "train.batch_size",
    "patience": "train.patience",
    "val_fraction": "train.val_fraction",
    "ablate_pag": "train.ablate_pag",
    "lr": "optimizer.lr",
    "optimizer": "optimizer.mode",
    "pos_weight": "classifier.pos_weight",
    "threshold": "classifier.threshold",
}


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _config_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model and training configuration")
    g.add_argument("--config", help="JSON config file (flags take precedence)")
    g.add_argument("--seed", type=int, help="Seed for initialization, shuffling and splits")
    g.add_argument("--d-u", type=int, help="Utterance representation size (default: 300)")
    g.add_argument("--d-e", type=int, help="Emotion embedding size (default: 100)")
    g.add_argument("--heads", type=int, help="Attention heads (default: 6)")
    g.add_argument("--base-dim", type=int, help="Base vector size (default: 100)")
    g.add_argument("--encoder", choices=["hash", "precomputed"], help="Base encoder (default: hash)")
    g.add_argument("--learned-qkv", action="store_const", const=True, help="Learned attention projections")
    g.add_argument("--window", type=int, help="Relation window w (default: 3)")
    g.add_argument("--layers", type=int, help="R-GCN layers (default: 1)")
    g.add_argument("--c-norm", choices=["constant", "degree"], help="Neighbor normalization (default: constant)")
    g.add_argument("--epochs", type=int, help="Maximum epochs (default: 30)")
    g.add_argument("--batch", type=int, help="Conversations per step (default: 4)")
    g.add_argument("--patience", type=int, help="Early-stopping patience in epochs (default: 10)")
    g.add_argument("--val-fraction", type=float, help="Validation share when no --val is given (default: 0.15)")
    g.add_argument("--ablate-pag", action="store_const", const=True, help="Bypass the position-aware graph")
    g.add_argument("--lr", type=float, help="Learning rate (default: 1e-3)")
    g.add_argument("--optimizer", choices=["adam", "sgd"], help="Update rule (default: adam)")
    g.add_argument("--pos-weight", type=float, help="Positive-class loss weight (default: 1.0)")
    g.add_argument("--threshold", type=float, help="Decision threshold (default: 0.5)")
    return p


def _data_parent(required: bool = True) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--data", required=required, help="Corpus JSON file")
    p.add_argument("--format", choices=["native", "reccon"], default="native", help="Corpus format (default: native)")
    p.add_argument("--strict", action="store_true", help="Validate explicit pair lists against enumeration")
    return p


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    """One flag per SyntheticSpec field, with the field's default and description."""
    g = p.add_argument_group("generator parameters")
    for name, info in SyntheticSpec.model_fields.items():
        flag = "--" + name.replace("_", "-")
        help_text = f"{info.description} (default: {info.default})"
        choices = get_args(info.annotation)
        if choices:
            g.add_argument(flag, choices=list(choices), default=info.default, help=help_text)
        else:
            g.add_argument(flag, type=info.annotation, default=info.default, help=help_text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="page-cce",
        description="Position-aware graph model for conversational causal emotion entailment",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="Echo run logs to the console")
    sub = parser.add_subparsers(dest="command", required=True)
    cfg, data = _config_parent(), _data_parent()

    p = sub.add_parser("train", parents=[data, cfg], help="Train a model")
    p.add_argument("--val", help="Validation corpus (default: seeded split of --data)")
    p.add_argument("--out", default="runs/train", help="Run directory (default: runs/train)")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("eval", parents=[data, cfg], help="Score a checkpoint")
    p.add_argument("--checkpoint", required=True, help="Checkpoint file written by train")
    p.add_argument("--out", default="runs/eval", help="Output directory (default: runs/eval)")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("synth", help="Write a synthetic planted-cause corpus")
    _add_spec_flags(p)
    p.add_argument("--out", default="synthetic.json", help="Output corpus file; the manifest goes beside it")
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("sweep", parents=[data, cfg], help="Window-size sweep")
    p.add_argument("--w", type=_int_list, default=[1, 2, 3, 4, 5], dest="windows", help="Windows, e.g. 1,2,3")
    p.add_argument("--seeds", type=_int_list, help="Seeds (default: five seeds from --seed)")
    p.add_argument("--eval-data", help="Evaluation corpus (default: each run's validation split)")
    p.add_argument("--workers", type=int, help="Worker processes")
    p.add_argument("--out", default="runs/sweep", help="Output directory (default: runs/sweep)")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("ablate", parents=[data, cfg], help="Full vs. w/o position-aware graph")
    p.add_argument("--seeds", type=_int_list, help="Seeds (default: five seeds from --seed)")
    p.add_argument("--eval-data", help="Evaluation corpus (default: each run's validation split)")
    p.add_argument("--workers", type=int, help="Worker processes")
    p.add_argument("--out", default="runs/ablate", help="Output directory (default: runs/ablate)")
    p.set_defaults(handler=cmd_ablate)

    p = sub.add_parser("export-graph", parents=[data], help="Export a conversation graph")
    p.add_argument("--conversation", help="Conversation id (default: first)")
    p.add_argument("--window", type=int, default=3, help="Relation window w (default: 3)")
    p.add_argument("--json", action="store_true", help="Write JSON instead of DOT")
    p.add_argument("--out", help="Output file (default: stdout)")
    p.set_defaults(handler=cmd_export_graph)

    p = sub.add_parser("stats", parents=[data], help="Corpus statistics")
    p.set_defaults(handler=cmd_stats)
    return parser


def config_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: getattr(args, dest) for dest, key in FLAG_KEYS.items() if getattr(args, dest, None) is not None}


def resolve_args_config(args: argparse.Namespace, base: Optional[PageConfig] = None) -> PageConfig:
    return resolve_config(config_overrides(args), config_path=getattr(args, "config", None), base=base)


def _load(path: Optional[str], args: argparse.Namespace):
    if path is None:
        return None
    return parse_corpus(path, format=args.format, strict=args.strict)


def _seeds(args: argparse.Namespace, config: PageConfig) -> List[int]:
    return args.seeds or [config.train.seed + i for i in range(5)]


def _manifest(command: str, args: argparse.Namespace, config: PageConfig, artifacts: Dict[str, str]) -> RunManifest:
    data = Path(args.data)
    if not data.exists():
        raise CorpusError(f"corpus file not found: {data}")
    return RunManifest(
        command=command,
        seed=config.train.seed,
        config=config,
        corpus_path=str(data),
        corpus_format=args.format,
        corpus_sha256=file_sha256(data),
        artifacts=artifacts,
    )


# Commands ----------------------------------------------------------------


def cmd_train(args: argparse.Namespace) -> int:
    config = resolve_args_config(args)
    storage = RunStorage(args.out)
    storage.save_manifest(
        _manifest(
            "train",
            args,
            config,
            {
                "checkpoint": storage.checkpoint_file.name,
                "training_log": storage.training_log_file.name,
                "metrics": storage.metrics_file.name,
                "predictions": storage.predictions_file.name,
                "log": "run.log",
            },
        )
    )
    run_logger = create_logger("train", log_dir=storage.run_dir, verbose=args.verbose)
    try:
        conversations = _load(args.data, args)
        val = _load(args.val, args)
        if val is None:
            conversations, val = split_corpus(conversations, config.train.val_fraction, config.train.seed)
        result = train(conversations, config, val_convs=val or None, run_logger=run_logger)
        storage.save_checkpoint(result.model, extra={"best_epoch": result.best_epoch})
        storage.save_training_log(result.history)

        reports = [evaluate(result.model, conversations, dataset="train").report]
        predictions = []
        if val:
            val_eval = evaluate(result.model, val, dataset="val")
            reports.append(val_eval.report)
            predictions = val_eval.predictions
        storage.save_metrics(reports)
        storage.save_predictions(predictions)
        for report in reports:
            run_logger.log_metrics(report)
            print(f"{report.dataset}: {report.summary()}")
        print(f"Run directory: {storage.run_dir}")
    finally:
        run_logger.close()
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    tensors, metadata = load_checkpoint(args.checkpoint)
    stored = PageModel.stored_config(metadata, source=args.checkpoint)
    config = resolve_args_config(args, base=stored)
    model = PageModel.from_checkpoint(tensors, metadata, config=config, source=args.checkpoint)
    storage = RunStorage(args.out)
    storage.save_manifest(
        _manifest(
            "eval",
            args,
            config,
            {
                "checkpoint": str(Path(args.checkpoint)),
                "checkpoint_sha256": file_sha256(args.checkpoint),
                "metrics": storage.metrics_file.name,
                "predictions": storage.predictions_file.name,
            },
        )
    )
    conversations = _load(args.data, args)
    result = evaluate(model, conversations, dataset=Path(args.data).stem)
    storage.save_metrics([result.report])
    storage.save_predictions(result.predictions)
    print(f"Neg F1 {result.report.neg_f1 * 100:.2f}")
    print(f"Pos F1 {result.report.pos_f1 * 100:.2f}")
    print(f"Macro F1 {result.report.macro_f1 * 100:.2f}")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    spec = SyntheticSpec(**{name: getattr(args, name) for name in SyntheticSpec.model_fields})
    out = Path(args.out)
    storage = RunStorage(out.parent)
    storage.save_manifest(
        RunManifest(command="synth", seed=spec.seed, synthetic=spec, artifacts={"corpus": out.name}),
        path=synth_manifest_path(out),
    )
    conversations = generate_synthetic(spec)
    write_corpus(conversations, out)
    stats = corpus_stats(conversations)
    print(
        f"Wrote {stats.conversations} conversations ({stats.positive_pairs} positive, "
        f"{stats.negative_pairs} negative pairs) to {out}"
    )
    return 0


def synth_manifest_path(out: Path) -> Path:
    """``data/train.json`` -> ``data/train.manifest.json``."""
    return out.with_name(f"{out.stem}.manifest.json")


def cmd_sweep(args: argparse.Namespace) -> int:
    config = resolve_args_config(args)
    storage = RunStorage(args.out)
    storage.save_manifest(_manifest("sweep", args, config, {"sweep": "sweep.csv"}))
    rows = window_sweep(
        _load(args.data, args),
        config,
        windows=args.windows,
        seeds=_seeds(args, config),
        eval_convs=_load(args.eval_data, args),
        max_workers=args.workers,
    )
    write_sweep_csv(rows, storage.run_dir / "sweep.csv")
    for row in rows:
        print(f"w={row.window}: Macro F1 {row.summary.mean * 100:.2f} ± {row.summary.std * 100:.2f}")
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    config = resolve_args_config(args)
    storage = RunStorage(args.out)
    storage.save_manifest(_manifest("ablate", args, config, {"ablation": "ablation.json"}))
    result = run_ablation(
        _load(args.data, args),
        config,
        seeds=_seeds(args, config),
        eval_convs=_load(args.eval_data, args),
        max_workers=args.workers,
    )
    payload = {"gap": result.gap, "runs": result.to_rows()}
    (storage.run_dir / "ablation.json").write_text(json.dumps(payload, indent=2), encoding="utf-8")
    for summary in (result.full, result.ablated):
        print(f"{summary.label}: Macro F1 {summary.mean * 100:.2f} ± {summary.std * 100:.2f}")
    print(f"Gap: {result.gap * 100:.2f} points")
    return 0


def cmd_export_graph(args: argparse.Namespace) -> int:
    conversations = _load(args.data, args)
    if not conversations:
        raise CorpusError("corpus is empty")
    if args.conversation is None:
        conv = conversations[0]
    else:
        matches = [c for c in conversations if c.id == args.conversation]
        if not matches:
            raise CorpusError(f"no conversation with id '{args.conversation}'")
        conv = matches[0]
    graph = build_graph(conv, window=args.window)
    text = json.dumps(graph_to_dict(graph), indent=2) + "\n" if args.json else export_dot(graph)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    stats = corpus_stats(_load(args.data, args))
    for key, value in stats.to_dict().items():
        print(f"{key:>16}: {value}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except (PageError, ValidationError, FileNotFoundError) as e:
        print(f"Error: {e}", file=sys.stderr)
        field = getattr(e, "field", None)
        if field:
            print(f"Mismatched field: {field}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

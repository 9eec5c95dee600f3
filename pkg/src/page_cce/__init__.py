"""
page_cce - Position-aware graph model for conversational causal emotion entailment.

Given a conversation whose utterances carry speakers and emotion labels, the
model scores every candidate pair (u_o, u_t), o <= t, with the probability
that u_o caused the emotion of u_t. Utterances are encoded with their emotion,
related by speaker-aware relative positions in a typed graph, and refined by
relational graph convolution before pair classification.

Public API:
-----------
- train(): Train a PageModel on a corpus
- evaluate(): Score a model's pair predictions (Pos/Neg/Macro F1)
- PageModel: The assembled model, with checkpoint save/load
- PageConfig / resolve_config(): Validated configuration

Corpus:
-------
- parse_corpus(), write_corpus(): native and RECCON JSON
- generate_synthetic(): planted-cause conversations
- enumerate_pairs(), corpus_stats()

Experiments:
------------
- run_ablation(): full vs. w/o position-aware graph over several seeds
- window_sweep(): Macro F1 as a function of the relation window

Example:
--------
    from page_cce import PageConfig, SyntheticSpec, evaluate, generate_synthetic, train

    corpus = generate_synthetic(SyntheticSpec(conversations=32, seed=1))
    config = PageConfig.model_validate({"encoder": {"d_u": 32, "d_e": 8, "heads": 2}})
    result = train(corpus, config)
    print(evaluate(result.model, corpus).report.summary())
"""

__version__ = "0.1.0"

# Public API - Configuration
from .config import (
    ClassifierConfig,
    EncoderConfig,
    GraphConfig,
    OptimizerConfig,
    PageConfig,
    TrainConfig,
    resolve_config,
)

# Public API - Types
from .types import (
    CandidatePair,
    EpochRecord,
    MetricsReport,
    PairPrediction,
    SeedSummary,
    StopDecision,
)

# Public API - Corpus
from .corpus import (
    Conversation,
    SyntheticSpec,
    Utterance,
    corpus_stats,
    enumerate_pairs,
    generate_synthetic,
    parse_corpus,
    write_corpus,
)

# Public API - Model
from .model import PageModel, build_graph, export_dot

# Public API - Harness
from .harness import evaluate, f1_scores, run_ablation, train, window_sweep

# Public API - Exceptions
from .exceptions import (
    CheckpointError,
    ConfigurationError,
    CorpusError,
    EncodingError,
    GradientError,
    GraphError,
    MetricsError,
    PageError,
    ShapeError,
    TrainingDivergedError,
)

# Public API - Logging
from .logging import RunLogger, create_logger

__all__ = [
    # Version
    "__version__",
    # Configuration
    "PageConfig",
    "EncoderConfig",
    "GraphConfig",
    "ClassifierConfig",
    "OptimizerConfig",
    "TrainConfig",
    "resolve_config",
    # Types
    "CandidatePair",
    "PairPrediction",
    "MetricsReport",
    "EpochRecord",
    "StopDecision",
    "SeedSummary",
    # Corpus
    "Conversation",
    "Utterance",
    "SyntheticSpec",
    "parse_corpus",
    "write_corpus",
    "generate_synthetic",
    "enumerate_pairs",
    "corpus_stats",
    # Model
    "PageModel",
    "build_graph",
    "export_dot",
    # Harness
    "train",
    "evaluate",
    "f1_scores",
    "run_ablation",
    "window_sweep",
    # Exceptions
    "PageError",
    "ConfigurationError",
    "ShapeError",
    "GradientError",
    "CorpusError",
    "EncodingError",
    "GraphError",
    "CheckpointError",
    "MetricsError",
    "TrainingDivergedError",
    # Logging
    "RunLogger",
    "create_logger",
]

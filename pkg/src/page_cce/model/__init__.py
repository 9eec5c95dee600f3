"""
Model components: base encoders, utterance encoder, position-aware graph,
R-GCN layers, pair classifier and the assembled PageModel.
"""
from .module import Module, prefixed
from .base_encoder import (
    BaseEncoder,
    HashEmbeddingEncoder,
    PrecomputedEncoder,
    create_base_encoder,
    encode_base,
    fnv1a_64,
    tokenize,
)
from .encoder import (
    EmotionVocab,
    ResidualMLP,
    UtteranceEncoder,
    fuse_emotion,
    project_utterance,
    residual_block,
    self_attend,
)
from .posgraph import (
    FUTURE,
    ConversationGraph,
    Edge,
    PositionRelation,
    RelativeDistance,
    build_graph,
    export_dot,
    graph_to_dict,
    relation,
    relation_vocabulary,
    relative_distance,
)
from .rgcn import RgcnLayer, relation_weight_name, rgcn_forward, stack_layers
from .classifier import ClassifierHead, bce_loss, classify_pair, classify_pairs
from .page import PageModel, check_compatible, read_predictions, write_predictions

__all__ = [
    # Base
    "Module",
    "prefixed",
    # Base encoders
    "BaseEncoder",
    "HashEmbeddingEncoder",
    "PrecomputedEncoder",
    "create_base_encoder",
    "encode_base",
    "fnv1a_64",
    "tokenize",
    # Utterance encoder
    "EmotionVocab",
    "ResidualMLP",
    "UtteranceEncoder",
    "project_utterance",
    "fuse_emotion",
    "self_attend",
    "residual_block",
    # Position-aware graph
    "RelativeDistance",
    "PositionRelation",
    "FUTURE",
    "Edge",
    "ConversationGraph",
    "relative_distance",
    "relation",
    "relation_vocabulary",
    "build_graph",
    "export_dot",
    "graph_to_dict",
    # R-GCN
    "RgcnLayer",
    "relation_weight_name",
    "rgcn_forward",
    "stack_layers",
    # Classifier
    "ClassifierHead",
    "classify_pair",
    "classify_pairs",
    "bce_loss",
    # Full model
    "PageModel",
    "check_compatible",
    "write_predictions",
    "read_predictions",
]

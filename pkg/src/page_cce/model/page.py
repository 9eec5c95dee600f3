"""
The full position-aware graph model.

Stages, per conversation:
1. UtteranceEncoder -> H_n (k x d_u)
2. build_graph + stacked R-GCN layers -> H' (skipped when ``ablate_pag`` is set, H' = H_n)
3. ClassifierHead over every candidate pair (o, t)

The ablated variant runs the same encoder and classifier code and simply has
no graph layers, so its parameters contain no relation weights.
"""
import csv
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import PageConfig
from ..corpus.models import Conversation
from ..corpus.pairs import candidate_pairs
from ..exceptions import CheckpointError
from ..numerics import Parameter, Tensor, load_checkpoint, save_checkpoint
from ..types import CandidatePair, PairPrediction
from .base_encoder import BaseEncoder
from .classifier import ClassifierHead, classify_pairs
from .encoder import EmotionVocab, UtteranceEncoder
from .module import Module, prefixed
from .posgraph import ConversationGraph, build_graph
from .rgcn import RgcnLayer, stack_layers

logger = logging.getLogger(__name__)

# Config fields that change parameter shapes or the graph; a checkpoint must agree on all of them.
STRUCTURAL_FIELDS: Tuple[Tuple[str, str], ...] = (
    ("encoder", "d_u"),
    ("encoder", "d_e"),
    ("encoder", "heads"),
    ("encoder", "mode"),
    ("encoder", "buckets"),
    ("encoder", "base_dim"),
    ("encoder", "mlp_hidden"),
    ("encoder", "learned_qkv"),
    ("graph", "window"),
    ("graph", "layers"),
    ("classifier", "hidden"),
    ("train", "ablate_pag"),
)

PREDICTION_COLUMNS = ["conv_id", "o", "t", "p", "label", "predicted"]


def check_compatible(stored: PageConfig, requested: PageConfig) -> None:
    """Raise CheckpointError naming the first structural field that differs."""
    for section, name in STRUCTURAL_FIELDS:
        have = getattr(getattr(stored, section), name)
        want = getattr(getattr(requested, section), name)
        if have != want:
            raise CheckpointError(
                f"checkpoint was trained with {section}.{name}={have!r}, configuration asks for {want!r}",
                field=f"{section}.{name}",
            )


class PageModel(Module):
    """Encoder, optional graph stage, and pair classifier."""

    def __init__(
        self,
        config: PageConfig,
        emotions: EmotionVocab,
        rng: Optional[np.random.Generator] = None,
        base: Optional[BaseEncoder] = None,
    ):
        self.config = config
        rng = rng if rng is not None else np.random.default_rng(config.train.seed)
        d_u = config.encoder.d_u
        self.encoder = UtteranceEncoder(config.encoder, emotions, rng, base=base)
        self.layers: List[RgcnLayer] = []
        if not config.train.ablate_pag:
            self.layers = [
                RgcnLayer(d_u, config.graph.window, rng, c_mode=config.graph.c_mode, c_value=config.graph.c_value)
                for _ in range(config.graph.layers)
            ]
        self.head = ClassifierHead(d_u, config.classifier.hidden, rng)

    @classmethod
    def for_corpus(cls, config: PageConfig, conversations: Iterable[Conversation]) -> "PageModel":
        """Fresh model whose emotion vocabulary comes from ``conversations``."""
        return cls(config, EmotionVocab.from_conversations(conversations))

    @property
    def ablated(self) -> bool:
        return not self.layers

    @property
    def emotions(self) -> EmotionVocab:
        return self.encoder.emotions

    def graph(self, conv: Conversation, node_features: Optional[Tensor] = None) -> ConversationGraph:
        return build_graph(conv, node_features, window=self.config.graph.window)

    def represent(self, conv: Conversation) -> Tensor:
        """Final utterance representations H' (k x d_u)."""
        h = self.encoder.encode(conv)
        if self.ablated:
            return h
        return stack_layers(self.graph(conv, h), h, self.layers)

    def forward(self, conv: Conversation) -> Tuple[List[CandidatePair], Tensor]:
        """Candidate pairs of ``conv`` and a flat tensor of their probabilities."""
        pairs = candidate_pairs(conv)
        if not pairs:
            return pairs, Tensor(np.zeros(0))
        h = self.represent(conv)
        return pairs, classify_pairs(h, [(p.o, p.t) for p in pairs], self.head)

    def forward_conversation(self, conv: Conversation) -> List[PairPrediction]:
        pairs, probabilities = self.forward(conv)
        threshold = self.config.classifier.threshold
        return [
            PairPrediction(pair=pair, probability=float(p), predicted=bool(p > threshold))
            for pair, p in zip(pairs, probabilities.data)
        ]

    def predict(self, conversations: Iterable[Conversation]) -> List[PairPrediction]:
        predictions: List[PairPrediction] = []
        for conv in conversations:
            predictions.extend(self.forward_conversation(conv))
        return predictions

    def named_parameters(self) -> List[Tuple[str, Parameter]]:
        named = prefixed("encoder", self.encoder.named_parameters())
        for i, layer in enumerate(self.layers):
            named += prefixed(f"rgcn{i}", layer.named_parameters())
        named += prefixed("head", self.head.named_parameters())
        return named

    # Checkpoints ---------------------------------------------------------

    def checkpoint_metadata(self) -> Dict[str, Any]:
        return {
            "config": self.config.model_dump(mode="json"),
            "emotions": self.emotions.labels,
        }

    def save(self, path: Union[str, Path], extra: Optional[Dict[str, Any]] = None) -> None:
        metadata = self.checkpoint_metadata()
        metadata.update(extra or {})
        save_checkpoint(path, self.state_dict(), metadata)

    @classmethod
    def load(cls, path: Union[str, Path], config: Optional[PageConfig] = None) -> "PageModel":
        """Rebuild a model from a checkpoint file."""
        tensors, metadata = load_checkpoint(path)
        return cls.from_checkpoint(tensors, metadata, config=config, source=str(path))

    @staticmethod
    def stored_config(metadata: Dict[str, Any], source: str = "checkpoint") -> PageConfig:
        if "config" not in metadata or "emotions" not in metadata:
            raise CheckpointError(f"{source} has no model metadata", field="metadata")
        return PageConfig.model_validate(metadata["config"])

    @classmethod
    def from_checkpoint(
        cls,
        tensors: Dict[str, np.ndarray],
        metadata: Dict[str, Any],
        config: Optional[PageConfig] = None,
        source: str = "checkpoint",
    ) -> "PageModel":
        """Rebuild a model from loaded checkpoint tensors and metadata.

        When ``config`` is given it must match the checkpoint on every
        structural field; its non-structural settings (threshold, seed, ...)
        are used for the returned model.
        """
        stored = cls.stored_config(metadata, source)
        if config is not None:
            check_compatible(stored, config)
        model = cls(config or stored, EmotionVocab(metadata["emotions"]))
        model.load_state_dict(tensors)
        logger.info("Loaded %d parameter tensors from %s", len(tensors), source)
        return model


def write_predictions(predictions: Sequence[PairPrediction], path: Union[str, Path]) -> None:
    """One CSV row per pair: conv_id, o, t, p, label, predicted."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=PREDICTION_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for prediction in predictions:
            writer.writerow(prediction.to_row())


def read_predictions(path: Union[str, Path]) -> List[PairPrediction]:
    """Inverse of ``write_predictions``; used to rescore a prediction dump."""
    rows = []
    with Path(path).open(encoding="utf-8", newline="") as f:
        for row in csv.DictReader(f):
            pair = CandidatePair(
                conversation_id=row["conv_id"], o=int(row["o"]), t=int(row["t"]), label=row["label"] == "1"
            )
            rows.append(PairPrediction(pair=pair, probability=float(row["p"]), predicted=row["predicted"] == "1"))
    return rows

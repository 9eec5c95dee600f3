"""
Utterance encoding with emotion.

Pipeline per conversation (row vectors throughout, one row per utterance):

    H_base = base encoder(utterances)                  k x d_base
    H_u    = H_base @ W_u                              k x d_u   (no bias)
    H_c    = [H_e, H_u] @ W_f + b_f                    k x d_u   (emotion fusion)
    H_a    = concat_n softmax(X_n X_n^T / sqrt(d_u)) X_n, X_n = n-th column slice of H_c
    x      = H_a + H_c
    H_n    = sigmoid(MLP(x)) + x,  MLP = linear -> relu -> linear

Attention uses H_c itself as Q, K and V unless ``learned_qkv`` is set.
Fusion projects the (d_e + d_u)-wide concatenation back to d_u so every head
works on d_u / N columns.
"""
import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import EncoderConfig
from ..corpus.models import UNK_EMOTION, Conversation
from ..exceptions import ConfigurationError, ShapeError
from ..numerics import (
    Parameter,
    Tensor,
    concat,
    matmul,
    normal,
    relu,
    sigmoid,
    slice_cols,
    softmax_rows,
    take_rows,
    xavier_uniform,
    zeros,
)
from .base_encoder import BaseEncoder, create_base_encoder
from .module import Module, prefixed

logger = logging.getLogger(__name__)


class EmotionVocab:
    """Emotion label -> row index; index 0 is the reserved unknown label."""

    def __init__(self, labels: Iterable[str]):
        seen = sorted({label.strip().lower() for label in labels} - {UNK_EMOTION})
        self.labels: List[str] = [UNK_EMOTION] + seen
        self._index = {label: i for i, label in enumerate(self.labels)}

    @classmethod
    def from_conversations(cls, conversations: Iterable[Conversation]) -> "EmotionVocab":
        return cls(e for conv in conversations for e in conv.emotions)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def index(self, label: str) -> int:
        idx = self._index.get(label.strip().lower())
        if idx is None:
            logger.debug("Unknown emotion '%s' mapped to %s", label, UNK_EMOTION)
            return 0
        return idx


def project_utterance(h_base: Tensor, w_u: Tensor) -> Tensor:
    """h_u = h_base @ W_u."""
    if h_base.shape[-1] != w_u.shape[0]:
        raise ShapeError("project_utterance", h_base.shape, w_u.shape, "base dim must match W_u rows")
    return matmul(h_base, w_u)


def fuse_emotion(h_u: Tensor, h_e: Tensor, w_f: Tensor, b_f: Tensor) -> Tensor:
    """h_c = concat(h_e, h_u) @ W_f + b_f, back to d_u columns."""
    if h_e.shape[1] + h_u.shape[1] != w_f.shape[0]:
        raise ShapeError("fuse_emotion", (h_e.shape[1], h_u.shape[1]), w_f.shape)
    return matmul(concat([h_e, h_u], axis=1), w_f) + b_f


def self_attend(
    h_c: Tensor,
    heads: int,
    qkv: Optional[Tuple[Tensor, Tensor, Tensor]] = None,
    return_weights: bool = False,
) -> Union[Tensor, Tuple[Tensor, List[Tensor]]]:
    """Multi-head self-attention over the utterances of one conversation.

    Scores are scaled by sqrt(d_u), the full width, not the head width.
    """
    k, d_u = h_c.shape
    if d_u % heads != 0:
        raise ShapeError("self_attend", h_c.shape, (heads,), "width must divide into heads")
    if qkv is None:
        q = key = value = h_c
    else:
        q, key, value = (matmul(h_c, w) for w in qkv)
    width = d_u // heads
    scale = 1.0 / math.sqrt(d_u)
    outputs: List[Tensor] = []
    weights: List[Tensor] = []
    for n in range(heads):
        start, stop = n * width, (n + 1) * width
        q_n = slice_cols(q, start, stop)
        k_n = q_n if key is q else slice_cols(key, start, stop)
        v_n = q_n if value is q else slice_cols(value, start, stop)
        attn = softmax_rows(matmul(q_n, k_n.T) * scale)
        weights.append(attn)
        outputs.append(matmul(attn, v_n))
    h_a = concat(outputs, axis=1)
    if return_weights:
        return h_a, weights
    return h_a


class ResidualMLP(Module):
    """Single-hidden-layer MLP used as h_n = sigmoid(MLP(x)) + x."""

    def __init__(self, dim: int, hidden: int, rng: np.random.Generator):
        self.w1 = xavier_uniform(rng, (dim, hidden), name="w1")
        self.b1 = zeros((hidden,), name="b1")
        self.w2 = xavier_uniform(rng, (hidden, dim), name="w2")
        self.b2 = zeros((dim,), name="b2")

    def __call__(self, x: Tensor) -> Tensor:
        return matmul(relu(matmul(x, self.w1) + self.b1), self.w2) + self.b2

    def named_parameters(self) -> List[Tuple[str, Parameter]]:
        return [("w1", self.w1), ("b1", self.b1), ("w2", self.w2), ("b2", self.b2)]


def residual_block(h_a: Tensor, h_c: Tensor, mlp: ResidualMLP) -> Tensor:
    if h_a.shape != h_c.shape:
        raise ShapeError("residual_block", h_a.shape, h_c.shape)
    x = h_a + h_c
    return sigmoid(mlp(x)) + x


class UtteranceEncoder(Module):
    """Conversation -> H_n (k x d_u)."""

    def __init__(
        self,
        config: EncoderConfig,
        emotions: EmotionVocab,
        rng: np.random.Generator,
        base: Optional[BaseEncoder] = None,
    ):
        self.config = config
        self.emotions = emotions
        self.base = base or create_base_encoder(config, rng)
        if self.base.output_dim != config.base_dim:
            raise ConfigurationError(
                f"base encoder produces {self.base.output_dim} columns, config says base_dim={config.base_dim}"
            )
        d_u, d_e = config.d_u, config.d_e
        self.w_u = xavier_uniform(rng, (config.base_dim, d_u), name="w_u")
        self.emotion_table = normal(rng, (len(emotions), d_e), std=0.02, name="emotion_table")
        self.w_f = xavier_uniform(rng, (d_e + d_u, d_u), name="w_f")
        self.b_f = zeros((d_u,), name="b_f")
        self.qkv: Optional[Tuple[Parameter, Parameter, Parameter]] = None
        if config.learned_qkv:
            self.qkv = tuple(xavier_uniform(rng, (d_u, d_u), name=n) for n in ("w_q", "w_k", "w_v"))
        self.mlp = ResidualMLP(d_u, config.mlp_hidden, rng)

    def emotion_embeddings(self, labels: Sequence[str]) -> Tensor:
        return take_rows(self.emotion_table, [self.emotions.index(label) for label in labels])

    def encode(self, conv: Conversation) -> Tensor:
        h_base = self.base.encode(conv.utterances)
        h_u = project_utterance(h_base, self.w_u)
        h_c = fuse_emotion(h_u, self.emotion_embeddings(conv.emotions), self.w_f, self.b_f)
        h_a = self_attend(h_c, self.config.heads, self.qkv)
        return residual_block(h_a, h_c, self.mlp)

    def named_parameters(self) -> List[Tuple[str, Parameter]]:
        named = prefixed("base", self.base.named_parameters())
        named += [
            ("w_u", self.w_u),
            ("emotion_table", self.emotion_table),
            ("w_f", self.w_f),
            ("b_f", self.b_f),
        ]
        if self.qkv is not None:
            named += [(p.name, p) for p in self.qkv]
        named += prefixed("mlp", self.mlp.named_parameters())
        return named

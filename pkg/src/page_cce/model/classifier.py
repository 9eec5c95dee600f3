"""
Pair classifier and training objective.

p(o, t) = sigmoid(MLP(concat(h'_o, h'_t))), MLP = linear -> relu -> linear(1).
The concatenation order matters: (o, t) and (t, o) are different inputs.
"""
from typing import List, Sequence, Tuple

import numpy as np

from ..exceptions import ShapeError
from ..numerics import (
    Parameter,
    Tensor,
    binary_cross_entropy,
    concat,
    matmul,
    relu,
    reshape,
    sigmoid,
    take_rows,
    xavier_uniform,
    zeros,
)
from .module import Module


class ClassifierHead(Module):
    """2 * d_u -> hidden -> 1."""

    def __init__(self, dim: int, hidden: int, rng: np.random.Generator):
        self.dim = dim
        self.w1 = xavier_uniform(rng, (2 * dim, hidden), name="w1")
        self.b1 = zeros((hidden,), name="b1")
        self.w2 = xavier_uniform(rng, (hidden, 1), name="w2")
        self.b2 = zeros((1,), name="b2")

    def __call__(self, pair_features: Tensor) -> Tensor:
        """Rows of concatenated pair features -> column of probabilities."""
        if pair_features.shape[-1] != 2 * self.dim:
            raise ShapeError("classifier", pair_features.shape, (2 * self.dim,), "expected 2 * d_u columns")
        hidden = relu(matmul(pair_features, self.w1) + self.b1)
        return sigmoid(matmul(hidden, self.w2) + self.b2)

    def named_parameters(self) -> List[Tuple[str, Parameter]]:
        return [("w1", self.w1), ("b1", self.b1), ("w2", self.w2), ("b2", self.b2)]


def classify_pair(h_o: Tensor, h_t: Tensor, head: ClassifierHead) -> Tensor:
    """Probability that u_o causes the emotion of u_t; 1 x 1."""
    if h_o.shape != h_t.shape:
        raise ShapeError("classify_pair", h_o.shape, h_t.shape)
    if len(h_o.shape) == 1:
        h_o, h_t = reshape(h_o, (1, -1)), reshape(h_t, (1, -1))
    return head(concat([h_o, h_t], axis=1))


def classify_pairs(h: Tensor, pairs: Sequence[Tuple[int, int]], head: ClassifierHead) -> Tensor:
    """Score every (o, t) pair of one conversation at once; returns a flat vector.

    ``h`` has one row per utterance; pair indices are 1-based.
    """
    if not pairs:
        return Tensor(np.zeros(0))
    sources = take_rows(h, [o - 1 for o, _ in pairs])
    targets = take_rows(h, [t - 1 for _, t in pairs])
    probabilities = head(concat([sources, targets], axis=1))
    return reshape(probabilities, (len(pairs),))


def bce_loss(predictions: Tensor, labels: Sequence[float], pos_weight: float = 1.0) -> Tensor:
    if predictions.size == 0 or len(labels) == 0:
        raise ShapeError("bce_loss", predictions.shape, (len(labels),), "empty batch")
    if predictions.size != len(labels):
        raise ShapeError("bce_loss", predictions.shape, (len(labels),))
    if any(y not in (0, 1) for y in labels):
        raise ValueError("labels must be 0 or 1")
    return binary_cross_entropy(reshape(predictions, (len(labels),)), labels, pos_weight=pos_weight)

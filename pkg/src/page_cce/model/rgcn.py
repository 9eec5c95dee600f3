"""
Relational graph convolution over a ConversationGraph.

For each node t (row vectors, one row per utterance)::

    h'_t = sigmoid( sum_r sum_{o in N_t^r} (1 / c_{t,r}) h_o W_r  +  h_t W_0 )

The double sum is computed per relation as A_r @ (H @ W_r), where
A_r[t, o] = 1 / c_{t,r} for every edge o -> t of type r.
"""
from typing import Dict, List, Literal, Sequence, Tuple

import numpy as np

from ..exceptions import GraphError
from ..numerics import Parameter, Tensor, matmul, sigmoid, xavier_uniform
from .module import Module
from .posgraph import ConversationGraph, PositionRelation, relation_vocabulary

NormMode = Literal["constant", "degree"]


def relation_weight_name(rel: PositionRelation) -> str:
    return f"w_rel{rel.doubled:+d}"


class RgcnLayer(Module):
    """One relational layer with a weight per relation plus a self weight."""

    def __init__(
        self,
        dim: int,
        window: int,
        rng: np.random.Generator,
        c_mode: NormMode = "constant",
        c_value: float = 2.0,
    ):
        if c_value <= 0:
            raise GraphError(f"normalization constant must be positive, got {c_value}")
        self.dim = dim
        self.window = window
        self.c_mode = c_mode
        self.c_value = c_value
        self.relation_weights: Dict[PositionRelation, Parameter] = {
            rel: xavier_uniform(rng, (dim, dim), name=relation_weight_name(rel)) for rel in relation_vocabulary(window)
        }
        self.w_self = xavier_uniform(rng, (dim, dim), name="w_self")

    def normalizer(self, graph: ConversationGraph, t: int, rel: PositionRelation) -> float:
        if self.c_mode == "degree":
            return float(len(graph.in_neighbors(t, rel)))
        return self.c_value

    def adjacency(self, graph: ConversationGraph, rel: PositionRelation) -> np.ndarray:
        """k x k matrix with A[t-1, o-1] = 1 / c_{t,r} for edges o -> t of type ``rel``."""
        a = np.zeros((graph.k, graph.k))
        for t in range(1, graph.k + 1):
            sources = graph.in_neighbors(t, rel)
            if sources:
                c = self.normalizer(graph, t, rel)
                for o in sources:
                    a[t - 1, o - 1] = 1.0 / c
        return a

    def named_parameters(self) -> List[Tuple[str, Parameter]]:
        named = [(p.name, p) for _, p in sorted(self.relation_weights.items())]
        named.append(("w_self", self.w_self))
        return named


def rgcn_forward(graph: ConversationGraph, h: Tensor, layer: RgcnLayer) -> Tensor:
    if h.shape[0] != graph.k:
        raise GraphError(f"graph has {graph.k} nodes but features have {h.shape[0]} rows")
    if h.shape[1] != layer.dim:
        raise GraphError(f"layer width {layer.dim} does not match feature width {h.shape[1]}")
    total = matmul(h, layer.w_self)
    for rel in graph.relations:
        weight = layer.relation_weights.get(rel)
        if weight is None:
            raise GraphError(
                f"no weight for relation {rel.label} (layer window {layer.window}, graph window {graph.window})"
            )
        total = total + matmul(Tensor(layer.adjacency(graph, rel)), matmul(h, weight))
    return sigmoid(total)


def stack_layers(graph: ConversationGraph, h: Tensor, layers: Sequence[RgcnLayer]) -> Tensor:
    if not layers:
        raise GraphError("at least one R-GCN layer is required")
    for layer in layers:
        h = rgcn_forward(graph, h, layer)
    return h

"""
Position-aware conversation graph.

Every ordered pair of distinct utterances (o, t) becomes a directed edge
o -> t typed by a position relation:

- relative distance ``D``:
    same speaker                     D = (o - t) / 2
    different speakers, |o - t| = 1  D = -1
    different speakers, otherwise    D = (o - t - 1) / 2
- relation: ``1`` when o > t (every future utterance shares one relation),
  ``-w`` when D < -w, ``D`` otherwise.

Distances can be half-integers when one speaker holds consecutive turns, so
both distances and relations are stored as doubled integers. Relation 0 is
never put on an edge; self-loops are handled by the R-GCN self weight.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from ..corpus.models import Conversation
from ..exceptions import GraphError
from ..numerics import Tensor


@dataclass(frozen=True, order=True)
class RelativeDistance:
    """Half-integer distance D_{o,t}, kept as 2 * D."""
    doubled: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)


@dataclass(frozen=True, order=True)
class PositionRelation:
    """Edge type r_{o,t}, kept as 2 * r."""
    doubled: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)

    @property
    def label(self) -> str:
        return str(self.value)

    @property
    def is_future(self) -> bool:
        return self.doubled > 0


FUTURE = PositionRelation(2)


def relative_distance(o: int, t: int, speaker_o: str, speaker_t: str) -> RelativeDistance:
    if speaker_o == speaker_t:
        return RelativeDistance(o - t)
    if abs(o - t) == 1:
        return RelativeDistance(-2)
    return RelativeDistance(o - t - 1)


def relation(o: int, t: int, distance: RelativeDistance, window: int) -> PositionRelation:
    """Clip a distance to the window; anything after the target is ``FUTURE``."""
    if o > t:
        return FUTURE
    if distance.doubled < -2 * window:
        return PositionRelation(-2 * window)
    return PositionRelation(distance.doubled)


def relation_vocabulary(window: int) -> List[PositionRelation]:
    """Every relation an edge can carry for this window, in ascending order."""
    if window < 1:
        raise GraphError(f"window must be at least 1, got {window}")
    return [PositionRelation(d) for d in range(-2 * window, 0)] + [FUTURE]


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    relation: PositionRelation


@dataclass(frozen=True)
class ConversationGraph:
    """Directed typed graph over the utterances of one conversation (1-based nodes)."""
    conversation_id: str
    k: int
    window: int
    speakers: Tuple[str, ...]
    emotions: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    node_features: Optional[Tensor] = None
    neighbors: Dict[Tuple[int, PositionRelation], Tuple[int, ...]] = field(default_factory=dict)

    @property
    def relations(self) -> List[PositionRelation]:
        """Relations that occur on at least one edge, ascending."""
        return sorted({e.relation for e in self.edges})

    def in_neighbors(self, t: int, rel: PositionRelation) -> Tuple[int, ...]:
        return self.neighbors.get((t, rel), ())


def build_graph(conv: Conversation, node_features: Optional[Tensor] = None, window: int = 3) -> ConversationGraph:
    """Connect every ordered pair o != t; edges sorted by target, then source."""
    if window < 1:
        raise GraphError(f"window must be at least 1, got {window}")
    k = conv.k
    if node_features is not None and node_features.shape[0] != k:
        raise GraphError(
            f"conversation '{conv.id}' has {k} utterances but node features have {node_features.shape[0]} rows"
        )
    speakers = conv.speakers
    edges: List[Edge] = []
    grouped: Dict[Tuple[int, PositionRelation], List[int]] = {}
    for t in range(1, k + 1):
        for o in range(1, k + 1):
            if o == t:
                continue
            d = relative_distance(o, t, speakers[o - 1], speakers[t - 1])
            r = relation(o, t, d, window)
            edges.append(Edge(o, t, r))
            grouped.setdefault((t, r), []).append(o)
    return ConversationGraph(
        conversation_id=conv.id,
        k=k,
        window=window,
        speakers=tuple(speakers),
        emotions=tuple(conv.emotions),
        edges=tuple(edges),
        node_features=node_features,
        neighbors={key: tuple(sources) for key, sources in grouped.items()},
    )


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: ConversationGraph) -> str:
    """Graphviz DOT text; nodes show speaker and emotion, edges their relation."""
    lines = [f"digraph {_quote(graph.conversation_id)} {{", "  rankdir=LR;"]
    for i in range(1, graph.k + 1):
        label = f"u{i} {graph.speakers[i - 1]} ({graph.emotions[i - 1]})"
        lines.append(f"  u{i} [label={_quote(label)}];")
    for edge in graph.edges:
        style = ", style=dashed" if edge.relation.is_future else ""
        lines.append(f"  u{edge.source} -> u{edge.target} [label={_quote(edge.relation.label)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dict(graph: ConversationGraph) -> Dict[str, Any]:
    return {
        "conversation_id": graph.conversation_id,
        "k": graph.k,
        "window": graph.window,
        "nodes": [
            {"index": i, "speaker": graph.speakers[i - 1], "emotion": graph.emotions[i - 1]}
            for i in range(1, graph.k + 1)
        ],
        "edges": [
            {"source": e.source, "target": e.target, "relation": e.relation.label} for e in graph.edges
        ],
    }

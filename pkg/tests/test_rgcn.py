"""
Tests for relational graph convolution.
"""
import numpy as np
import pytest

from page_cce.corpus import Conversation
from page_cce.exceptions import GraphError
from page_cce.model import FUTURE, PositionRelation, RgcnLayer, build_graph, rgcn_forward, stack_layers
from page_cce.numerics import Tensor, check_gradients, tensor_mean


def make_conversation(speakers) -> Conversation:
    """Helper to create a conversation with the given speakers."""
    return Conversation(
        id="c",
        utterances=[{"idx": i + 1, "speaker": s, "text": "x", "emotion": "joy"} for i, s in enumerate(speakers)],
    )


def make_layer(dim: int = 3, window: int = 2, seed: int = 0, **kwargs) -> RgcnLayer:
    return RgcnLayer(dim, window, np.random.default_rng(seed), **kwargs)


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def dense_reference(graph, h: np.ndarray, layer: RgcnLayer) -> np.ndarray:
    """Node-by-node evaluation of the layer."""
    out = np.zeros_like(h)
    for t in range(1, graph.k + 1):
        total = h[t - 1] @ layer.w_self.data
        for rel, w in layer.relation_weights.items():
            sources = graph.in_neighbors(t, rel)
            if sources:
                c = layer.normalizer(graph, t, rel)
                for o in sources:
                    total = total + (h[o - 1] @ w.data) / c
        out[t - 1] = sigmoid(total)
    return out


class TestRgcnForward:
    """Single-layer behavior."""

    def test_zero_weights_give_half(self):
        """All-zero weights map every component to sigmoid(0)."""
        layer = make_layer()
        for p in layer.parameters():
            p.data[...] = 0.0
        graph = build_graph(make_conversation("ABAB"), window=2)
        out = rgcn_forward(graph, Tensor(np.ones((4, 3))), layer)
        np.testing.assert_allclose(out.data, 0.5)

    def test_single_node_uses_self_weight_only(self):
        """With no edges, h' = sigmoid(h W_0)."""
        layer = make_layer()
        h = np.array([[0.2, -0.4, 1.0]])
        out = rgcn_forward(build_graph(make_conversation("A"), window=2), Tensor(h), layer)
        np.testing.assert_allclose(out.data, sigmoid(h @ layer.w_self.data))

    def test_two_nodes_against_hand_computation(self):
        """k = 2 with c = 2: h'_2 = sigmoid(0.5 h_1 W_r + h_2 W_0)."""
        layer = make_layer(window=1)
        graph = build_graph(make_conversation("AB"), window=1)
        h = np.random.default_rng(1).normal(size=(2, 3))
        out = rgcn_forward(graph, Tensor(h), layer).data
        w_past = layer.relation_weights[PositionRelation(-2)].data
        w_future = layer.relation_weights[FUTURE].data
        np.testing.assert_allclose(out[1], sigmoid(0.5 * h[0] @ w_past + h[1] @ layer.w_self.data))
        np.testing.assert_allclose(out[0], sigmoid(0.5 * h[1] @ w_future + h[0] @ layer.w_self.data))

    @pytest.mark.parametrize("c_mode", ["constant", "degree"])
    def test_matches_dense_reference(self, c_mode):
        """Vectorized evaluation equals the node-by-node sum."""
        layer = make_layer(dim=4, window=2, c_mode=c_mode)
        graph = build_graph(make_conversation("AABABBA"), window=2)
        h = np.random.default_rng(2).normal(size=(7, 4))
        np.testing.assert_allclose(rgcn_forward(graph, Tensor(h), layer).data, dense_reference(graph, h, layer))

    def test_outputs_in_open_unit_interval(self):
        """Sigmoid outputs lie strictly inside (0, 1)."""
        graph = build_graph(make_conversation("ABABA"), window=2)
        out = rgcn_forward(graph, Tensor(np.random.default_rng(3).normal(size=(5, 3))), make_layer()).data
        assert np.all((out > 0) & (out < 1))

    def test_zeroing_one_relation_removes_its_messages(self):
        """Only edges of the zeroed relation stop contributing."""
        graph = build_graph(make_conversation("ABAB"), window=2)
        h = np.random.default_rng(4).normal(size=(4, 3))
        layer = make_layer()
        layer.relation_weights[FUTURE].data[...] = 0.0
        out = rgcn_forward(graph, Tensor(h), layer).data
        # u4 has no future neighbors, so it is unaffected; compare with the reference
        np.testing.assert_allclose(out, dense_reference(graph, h, layer))
        fresh = make_layer()
        np.testing.assert_allclose(out[3], rgcn_forward(graph, Tensor(h), fresh).data[3])

    def test_permutation_equivariance(self):
        """Relabeling nodes with a consistent graph permutes output rows."""
        layer = make_layer(dim=3, window=2)
        graph = build_graph(make_conversation("ABAB"), window=2)
        h = np.random.default_rng(5).normal(size=(4, 3))
        base = rgcn_forward(graph, Tensor(h), layer).data
        perm = np.array([2, 0, 3, 1])
        inv = np.argsort(perm)
        # adjacency over permuted node ids, evaluated densely
        out = np.zeros_like(h)
        hp = h[perm]
        for new_t in range(4):
            total = hp[new_t] @ layer.w_self.data
            t = perm[new_t] + 1
            for rel, w in layer.relation_weights.items():
                for o in graph.in_neighbors(t, rel):
                    total = total + (hp[inv[o - 1]] @ w.data) / 2.0
            out[new_t] = sigmoid(total)
        np.testing.assert_allclose(out, base[perm])

    def test_missing_relation_weight(self):
        """A graph built with a wider window than the layer is rejected."""
        graph = build_graph(make_conversation("AAAAAA"), window=3)
        with pytest.raises(GraphError):
            rgcn_forward(graph, Tensor(np.ones((6, 3))), make_layer(window=1))

    def test_row_count_mismatch(self):
        """Feature rows must match the node count."""
        with pytest.raises(GraphError):
            rgcn_forward(build_graph(make_conversation("AB")), Tensor(np.ones((3, 3))), make_layer(window=3))


class TestStackLayers:
    """Stacked layers."""

    def test_single_layer_equals_forward(self):
        """L = 1 is exactly rgcn_forward."""
        layer = make_layer()
        graph = build_graph(make_conversation("ABA"), window=2)
        h = Tensor(np.random.default_rng(6).normal(size=(3, 3)))
        np.testing.assert_array_equal(stack_layers(graph, h, [layer]).data, rgcn_forward(graph, h, layer).data)

    def test_zero_second_layer(self):
        """A zero second layer outputs 0.5 everywhere."""
        second = make_layer(seed=1)
        for p in second.parameters():
            p.data[...] = 0.0
        graph = build_graph(make_conversation("ABA"), window=2)
        out = stack_layers(graph, Tensor(np.ones((3, 3))), [make_layer(), second])
        np.testing.assert_allclose(out.data, 0.5)

    def test_requires_a_layer(self):
        """An empty stack is rejected."""
        with pytest.raises(GraphError):
            stack_layers(build_graph(make_conversation("A")), Tensor(np.ones((1, 3))), [])

    def test_two_layer_gradients(self):
        """Gradients through two layers match central differences."""
        layers = [make_layer(dim=3, window=2, seed=0), make_layer(dim=3, window=2, seed=1)]
        graph = build_graph(make_conversation("ABAAB"), window=2)
        h = Tensor(np.random.default_rng(7).normal(size=(5, 3)))

        def loss_fn():
            return tensor_mean(stack_layers(graph, h, layers))

        for layer in layers:
            errors = check_gradients(loss_fn, layer.parameters())
            assert max(errors.values()) < 1e-4

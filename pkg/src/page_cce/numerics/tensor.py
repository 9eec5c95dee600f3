"""
Dense float64 tensors with reverse-mode gradients.

Each differentiable op is a ``Function`` subclass. Applying one records the
node on its output tensor (``_ctx``), so following ``_ctx.parents`` from a loss
yields the computation record that ``backward`` replays in reverse.

Only what the PAGE layers need is provided:
- 2-D matmul, transpose, column slicing, row gathering, concatenation
- elementwise add/sub/mul, scaling, sigmoid, relu
- row-wise softmax, sum/mean reductions, reshape
- binary cross-entropy on probabilities

Broadcasting is limited to adding a 1-D bias to every row of a matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import GradientError, ShapeError

ArrayLike = Union[np.ndarray, Sequence[float], float]

# Largest/smallest float64 strictly inside (0, 1).
_SIGMOID_HIGH = np.nextafter(1.0, 0.0)
_SIGMOID_LOW = np.finfo(np.float64).tiny


class Tensor:
    """A float64 array that can take part in gradient computation."""

    def __init__(
        self,
        data: ArrayLike,
        requires_grad: bool = False,
        name: Optional[str] = None,
        _ctx: Optional["Function"] = None,
    ):
        self.data = np.asarray(data, dtype=np.float64)
        self.name = name
        self._ctx = _ctx
        self.requires_grad = requires_grad or _ctx is not None
        self.grad: Optional[np.ndarray] = (
            np.zeros_like(self.data) if requires_grad and _ctx is None else None
        )
        self._grad_ready = False

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Tensor{label} shape={self.shape} requires_grad={self.requires_grad}>"

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self.data.shape)

    @property
    def size(self) -> int:
        return int(self.data.size)

    @property
    def is_leaf(self) -> bool:
        return self._ctx is None

    @property
    def T(self) -> "Tensor":
        return transpose(self)

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeError("item", self.shape, (1,), "tensor is not a scalar")
        return float(self.data.reshape(()))

    def numpy(self) -> np.ndarray:
        """Return a copy of the values."""
        return self.data.copy()

    def zero_grad(self) -> None:
        if self.requires_grad and self.is_leaf:
            self.grad = np.zeros_like(self.data)
        self._grad_ready = False

    @staticmethod
    def _lift(value: Union["Tensor", ArrayLike], like: "Tensor") -> "Tensor":
        if isinstance(value, Tensor):
            return value
        return Tensor(np.broadcast_to(np.asarray(value, dtype=np.float64), like.shape).copy())

    def __add__(self, other: Union["Tensor", ArrayLike]) -> "Tensor":
        return add(self, self._lift(other, self))

    def __radd__(self, other: ArrayLike) -> "Tensor":
        return add(self._lift(other, self), self)

    def __sub__(self, other: Union["Tensor", ArrayLike]) -> "Tensor":
        return sub(self, self._lift(other, self))

    def __rsub__(self, other: ArrayLike) -> "Tensor":
        return sub(self._lift(other, self), self)

    def __mul__(self, other: Union["Tensor", float]) -> "Tensor":
        if isinstance(other, Tensor):
            return mul(self, other)
        return scale(self, float(other))

    def __rmul__(self, other: float) -> "Tensor":
        return scale(self, float(other))

    def __truediv__(self, other: float) -> "Tensor":
        return scale(self, 1.0 / float(other))

    def __neg__(self) -> "Tensor":
        return scale(self, -1.0)

    def __matmul__(self, other: "Tensor") -> "Tensor":
        return matmul(self, other)

    def sum(self) -> "Tensor":
        return tensor_sum(self)

    def mean(self) -> "Tensor":
        return tensor_mean(self)


class Parameter(Tensor):
    """A named, trainable leaf tensor. Always owns its values and gradient."""

    def __init__(self, data: ArrayLike, name: str = ""):
        super().__init__(np.array(data, dtype=np.float64, copy=True), requires_grad=True, name=name)

    def __repr__(self) -> str:
        return f"<Parameter {self.name!r} shape={self.shape}>"


class Function:
    """A recorded operation: computes a forward value and maps output grads to input grads."""

    def __init__(self, *parents: Tensor):
        self.parents: Tuple[Tensor, ...] = parents

    @classmethod
    def apply(cls, *parents: Tensor, **kwargs) -> Tensor:
        fn = cls(*parents)
        out = fn.forward(*[p.data for p in parents], **kwargs)
        if any(p.requires_grad for p in parents):
            return Tensor(out, _ctx=fn)
        return Tensor(out)

    @property
    def op_name(self) -> str:
        return type(self).__name__

    def forward(self, *args: np.ndarray, **kwargs) -> np.ndarray:
        raise NotImplementedError

    def backward(self, grad: np.ndarray) -> Sequence[Optional[np.ndarray]]:
        raise NotImplementedError


@dataclass
class ComputationRecord:
    """Recorded ops reachable from a loss, in forward (topological) order."""
    outputs: List[Tensor] = field(default_factory=list)

    @property
    def ops(self) -> List[Function]:
        return [t._ctx for t in self.outputs if t._ctx is not None]

    def __len__(self) -> int:
        return len(self.outputs)


def build_record(root: Tensor) -> ComputationRecord:
    """Collect every recorded op reachable from ``root``, parents before children."""
    order: List[Tensor] = []
    visited: set = set()
    stack: List[Tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if node._ctx is None:
            continue
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node._ctx.parents:
            if parent._ctx is not None and id(parent) not in visited:
                stack.append((parent, False))
    return ComputationRecord(outputs=order)


def backward(loss: Tensor) -> ComputationRecord:
    """Populate ``.grad`` on every tensor the scalar ``loss`` depends on.

    Leaf gradients accumulate across calls until ``zero_grad``; intermediate
    gradients are overwritten.
    """
    if loss.data.size != 1:
        raise GradientError(f"backward requires a scalar loss, got shape {loss.shape}")
    if not loss.requires_grad:
        raise GradientError("loss does not depend on any tensor requiring gradients")

    record = build_record(loss)
    pending = {id(loss): np.ones_like(loss.data)}
    for node in reversed(record.outputs):
        grad = pending.pop(id(node), None)
        if grad is None:
            continue
        node.grad = grad
        for parent, parent_grad in zip(node._ctx.parents, node._ctx.backward(grad)):
            if parent_grad is None or not parent.requires_grad:
                continue
            if parent.is_leaf:
                parent.grad += parent_grad
                parent._grad_ready = True
            else:
                acc = pending.get(id(parent))
                pending[id(parent)] = parent_grad if acc is None else acc + parent_grad

    if loss.is_leaf:
        loss.grad += 1.0
        loss._grad_ready = True
    return record


# ---------------------------------------------------------------------------
# Ops
# ---------------------------------------------------------------------------


class Add(Function):
    def forward(self, a, b):
        if a.shape != b.shape and not (a.ndim == 2 and b.ndim == 1 and b.shape[0] == a.shape[1]):
            raise ShapeError("add", a.shape, b.shape)
        self.row_bias = a.shape != b.shape
        return a + b

    def backward(self, grad):
        return grad, grad.sum(axis=0) if self.row_bias else grad


class Sub(Function):
    def forward(self, a, b):
        if a.shape != b.shape:
            raise ShapeError("sub", a.shape, b.shape)
        return a - b

    def backward(self, grad):
        return grad, -grad


class Mul(Function):
    def forward(self, a, b):
        if a.shape != b.shape:
            raise ShapeError("mul", a.shape, b.shape)
        self.a, self.b = a, b
        return a * b

    def backward(self, grad):
        return grad * self.b, grad * self.a


class Scale(Function):
    def forward(self, a, factor: float = 1.0):
        self.factor = factor
        return a * factor

    def backward(self, grad):
        return (grad * self.factor,)


class MatMul(Function):
    def forward(self, a, b):
        if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
            raise ShapeError("matmul", a.shape, b.shape, "inner extents must agree")
        self.a, self.b = a, b
        return a @ b

    def backward(self, grad):
        return grad @ self.b.T, self.a.T @ grad


class Transpose(Function):
    def forward(self, a):
        if a.ndim != 2:
            raise ShapeError("transpose", a.shape, (), "expected a matrix")
        return a.T.copy()

    def backward(self, grad):
        return (grad.T,)


class Sigmoid(Function):
    def forward(self, a):
        z = np.exp(-np.abs(a))
        out = np.where(a >= 0, 1.0 / (1.0 + z), z / (1.0 + z))
        self.out = np.clip(out, _SIGMOID_LOW, _SIGMOID_HIGH)
        return self.out

    def backward(self, grad):
        return (grad * self.out * (1.0 - self.out),)


class Relu(Function):
    def forward(self, a):
        self.mask = a > 0
        return np.where(self.mask, a, 0.0)

    def backward(self, grad):
        return (grad * self.mask,)


class SoftmaxRows(Function):
    def forward(self, a):
        if a.ndim != 2:
            raise ShapeError("softmax_rows", a.shape, (), "expected a matrix")
        shifted = a - a.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        self.out = e / e.sum(axis=1, keepdims=True)
        return self.out

    def backward(self, grad):
        s = self.out
        return (s * (grad - (grad * s).sum(axis=1, keepdims=True)),)


class Sum(Function):
    def forward(self, a):
        self.shape = a.shape
        return np.asarray(a.sum())

    def backward(self, grad):
        return (np.full(self.shape, float(grad)),)


class Mean(Function):
    def forward(self, a):
        self.shape = a.shape
        return np.asarray(a.mean())

    def backward(self, grad):
        return (np.full(self.shape, float(grad) / max(int(np.prod(self.shape)), 1)),)


class Reshape(Function):
    def forward(self, a, shape: Tuple[int, ...] = ()):
        self.in_shape = a.shape
        try:
            return a.reshape(shape)
        except ValueError as e:
            raise ShapeError("reshape", a.shape, shape) from e

    def backward(self, grad):
        return (grad.reshape(self.in_shape),)


class SliceCols(Function):
    def forward(self, a, start: int = 0, stop: int = 0):
        if a.ndim != 2 or not 0 <= start < stop <= a.shape[1]:
            raise ShapeError("slice_cols", a.shape, (start, stop), "column range out of bounds")
        self.in_shape, self.start, self.stop = a.shape, start, stop
        return a[:, start:stop].copy()

    def backward(self, grad):
        full = np.zeros(self.in_shape)
        full[:, self.start:self.stop] = grad
        return (full,)


class TakeRows(Function):
    def forward(self, a, index: Optional[np.ndarray] = None):
        index = np.asarray(index, dtype=np.int64)
        if a.ndim != 2 or (index.size and (index.min() < 0 or index.max() >= a.shape[0])):
            raise ShapeError("take_rows", a.shape, index.shape, "row index out of bounds")
        self.in_shape, self.index = a.shape, index
        return a[index]

    def backward(self, grad):
        full = np.zeros(self.in_shape)
        np.add.at(full, self.index, grad)
        return (full,)


class Concat(Function):
    def forward(self, *arrays, axis: int = 0):
        other = 1 - axis
        if any(a.ndim != 2 for a in arrays) or len({a.shape[other] for a in arrays}) > 1:
            raise ShapeError("concat", arrays[0].shape, arrays[-1].shape, f"extents off axis {axis} differ")
        self.axis = axis
        self.bounds = np.cumsum([a.shape[axis] for a in arrays])[:-1]
        return np.concatenate(arrays, axis=axis)

    def backward(self, grad):
        return np.split(grad, self.bounds, axis=self.axis)


class BinaryCrossEntropy(Function):
    """Mean of -[w*y*ln p + (1-y)*ln(1-p)] over probabilities ``p``."""

    EPS = 1e-15

    def forward(self, p, labels: Optional[np.ndarray] = None, pos_weight: float = 1.0):
        y = np.asarray(labels, dtype=np.float64)
        if p.shape != y.shape:
            raise ShapeError("bce", p.shape, y.shape)
        self.p = np.clip(p, self.EPS, 1.0 - self.EPS)
        self.y, self.w = y, pos_weight
        terms = self.w * y * np.log(self.p) + (1.0 - y) * np.log(1.0 - self.p)
        return np.asarray(-terms.mean())

    def backward(self, grad):
        n = self.p.size
        d = -(self.w * self.y / self.p - (1.0 - self.y) / (1.0 - self.p)) / n
        return (float(grad) * d,)


# Functional wrappers ---------------------------------------------------------


def add(a: Tensor, b: Tensor) -> Tensor:
    return Add.apply(a, b)


def sub(a: Tensor, b: Tensor) -> Tensor:
    return Sub.apply(a, b)


def mul(a: Tensor, b: Tensor) -> Tensor:
    return Mul.apply(a, b)


def scale(a: Tensor, factor: float) -> Tensor:
    return Scale.apply(a, factor=factor)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    return MatMul.apply(a, b)


def transpose(a: Tensor) -> Tensor:
    return Transpose.apply(a)


def sigmoid(a: Tensor) -> Tensor:
    return Sigmoid.apply(a)


def relu(a: Tensor) -> Tensor:
    return Relu.apply(a)


def softmax_rows(a: Tensor) -> Tensor:
    return SoftmaxRows.apply(a)


def tensor_sum(a: Tensor) -> Tensor:
    return Sum.apply(a)


def tensor_mean(a: Tensor) -> Tensor:
    return Mean.apply(a)


def reshape(a: Tensor, shape: Tuple[int, ...]) -> Tensor:
    return Reshape.apply(a, shape=tuple(shape))


def slice_cols(a: Tensor, start: int, stop: int) -> Tensor:
    return SliceCols.apply(a, start=start, stop=stop)


def take_rows(a: Tensor, index: Iterable[int]) -> Tensor:
    return TakeRows.apply(a, index=np.fromiter(index, dtype=np.int64))


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    if not tensors:
        raise ShapeError("concat", (), (), "nothing to concatenate")
    if len(tensors) == 1:
        return tensors[0]
    return Concat.apply(*tensors, axis=axis)


def binary_cross_entropy(
    probabilities: Tensor,
    labels: Sequence[float],
    pos_weight: float = 1.0,
) -> Tensor:
    return BinaryCrossEntropy.apply(probabilities, labels=np.asarray(labels, dtype=np.float64), pos_weight=pos_weight)

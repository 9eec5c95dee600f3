"""
Small dense tensor library with reverse-mode gradients.

Example:
    from page_cce.numerics import Parameter, Adam, backward, matmul, tensor_sum

    w = Parameter([[0.5, -0.2]], name="w")
    opt = Adam([w], lr=1e-2)
    loss = tensor_sum(matmul(w, w.T))
    backward(loss)
    opt.step()
"""
from .tensor import (
    ComputationRecord,
    Function,
    Parameter,
    Tensor,
    add,
    backward,
    binary_cross_entropy,
    build_record,
    concat,
    matmul,
    mul,
    relu,
    reshape,
    scale,
    sigmoid,
    slice_cols,
    softmax_rows,
    sub,
    take_rows,
    tensor_mean,
    tensor_sum,
    transpose,
)
from .optim import SGD, Adam, Optimizer, OptimizerState, create_optimizer
from .gradcheck import check_gradients, numerical_gradient, relative_error
from .checkpoint import load_checkpoint, save_checkpoint
from .init import normal, xavier_uniform, zeros

__all__ = [
    # Tensors
    "Tensor",
    "Parameter",
    "Function",
    "ComputationRecord",
    "build_record",
    "backward",
    # Ops
    "add",
    "sub",
    "mul",
    "scale",
    "matmul",
    "transpose",
    "sigmoid",
    "relu",
    "softmax_rows",
    "tensor_sum",
    "tensor_mean",
    "reshape",
    "slice_cols",
    "take_rows",
    "concat",
    "binary_cross_entropy",
    # Optimizers
    "Optimizer",
    "OptimizerState",
    "SGD",
    "Adam",
    "create_optimizer",
    # Gradient checks
    "numerical_gradient",
    "relative_error",
    "check_gradients",
    # Checkpoints
    "save_checkpoint",
    "load_checkpoint",
    # Init
    "xavier_uniform",
    "normal",
    "zeros",
]

"""
Optimizers for Parameter lists.

Two update rules are provided:
- ``SGD``: plain gradient descent, w <- w - lr * g
- ``Adam``: adaptive moments with bias correction (the default)

Both refuse to step unless ``backward`` has populated at least one gradient
since the last step, and both zero gradients after updating.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..exceptions import ConfigurationError, GradientError
from .tensor import Parameter


@dataclass
class OptimizerState:
    """Step counter, hyperparameters and per-parameter moment accumulators."""
    lr: float
    step: int = 0
    beta1: Optional[float] = None
    beta2: Optional[float] = None
    eps: Optional[float] = None
    first_moments: Dict[int, np.ndarray] = field(default_factory=dict)
    second_moments: Dict[int, np.ndarray] = field(default_factory=dict)


class Optimizer:
    """Base class: gradient bookkeeping shared by every update rule."""

    def __init__(self, params: Sequence[Parameter], state: OptimizerState):
        self.params: List[Parameter] = list(params)
        self.state = state
        if state.lr <= 0:
            raise ConfigurationError(f"learning rate must be positive, got {state.lr}")

    def zero_grad(self) -> None:
        for p in self.params:
            p.zero_grad()

    def step(self) -> None:
        if not any(p._grad_ready for p in self.params):
            raise GradientError("optimizer step requested before backward populated any gradient")
        self.state.step += 1
        for index, p in enumerate(self.params):
            self._update(index, p)
        self.zero_grad()

    def _update(self, index: int, param: Parameter) -> None:
        raise NotImplementedError


class SGD(Optimizer):
    def __init__(self, params: Sequence[Parameter], lr: float = 1e-3):
        super().__init__(params, OptimizerState(lr=lr))

    def _update(self, index: int, param: Parameter) -> None:
        param.data -= self.state.lr * param.grad


class Adam(Optimizer):
    def __init__(
        self,
        params: Sequence[Parameter],
        lr: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        super().__init__(params, OptimizerState(lr=lr, beta1=beta1, beta2=beta2, eps=eps))
        for index, p in enumerate(self.params):
            self.state.first_moments[index] = np.zeros_like(p.data)
            self.state.second_moments[index] = np.zeros_like(p.data)

    def _update(self, index: int, param: Parameter) -> None:
        s = self.state
        g = param.grad
        m = s.first_moments[index]
        v = s.second_moments[index]
        m *= s.beta1
        m += (1.0 - s.beta1) * g
        v *= s.beta2
        v += (1.0 - s.beta2) * g * g
        m_hat = m / (1.0 - s.beta1 ** s.step)
        v_hat = v / (1.0 - s.beta2 ** s.step)
        param.data -= s.lr * m_hat / (np.sqrt(v_hat) + s.eps)


def create_optimizer(params: Sequence[Parameter], config) -> Optimizer:
    """Build the optimizer named by an ``OptimizerConfig``."""
    if config.mode == "adam":
        return Adam(params, lr=config.lr, beta1=config.beta1, beta2=config.beta2, eps=config.eps)
    if config.mode == "sgd":
        return SGD(params, lr=config.lr)
    raise ConfigurationError(f"Unknown optimizer mode: {config.mode}")

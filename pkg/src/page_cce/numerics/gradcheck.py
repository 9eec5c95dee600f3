"""
Central finite-difference gradient checks.
"""
from typing import Callable, Dict, Sequence

import numpy as np

from .tensor import Tensor, backward


def numerical_gradient(loss_fn: Callable[[], Tensor], tensor: Tensor, step: float = 1e-5) -> np.ndarray:
    """Estimate d loss / d tensor by perturbing each entry in place."""
    grad = np.zeros_like(tensor.data)
    flat = tensor.data.reshape(-1)
    out = grad.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + step
        plus = loss_fn().item()
        flat[i] = original - step
        minus = loss_fn().item()
        flat[i] = original
        out[i] = (plus - minus) / (2.0 * step)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-7) -> float:
    """||a - n|| / max(||a||, ||n||, floor)."""
    diff = float(np.linalg.norm(analytic - numeric))
    scale = max(float(np.linalg.norm(analytic)), float(np.linalg.norm(numeric)), floor)
    return diff / scale


def check_gradients(
    loss_fn: Callable[[], Tensor],
    tensors: Sequence[Tensor],
    step: float = 1e-5,
) -> Dict[str, float]:
    """Compare reverse-mode gradients with central differences.

    Returns the relative error per tensor, keyed by tensor name (or position).
    """
    for t in tensors:
        t.zero_grad()
    backward(loss_fn())
    analytic = [t.grad.copy() for t in tensors]
    errors: Dict[str, float] = {}
    for position, (t, a) in enumerate(zip(tensors, analytic)):
        key = t.name or str(position)
        errors[key] = relative_error(a, numerical_gradient(loss_fn, t, step))
        t.zero_grad()
    return errors

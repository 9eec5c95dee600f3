"""
Minimal layer base class: named parameter bookkeeping shared by every layer.
"""
from typing import Dict, List, Tuple

import numpy as np

from ..exceptions import CheckpointError
from ..numerics import Parameter


class Module:
    """Something with trainable parameters.

    Subclasses implement ``named_parameters``; names are dotted and stable, so
    they double as checkpoint keys.
    """

    def named_parameters(self) -> List[Tuple[str, Parameter]]:
        return []

    def parameters(self) -> List[Parameter]:
        return [p for _, p in self.named_parameters()]

    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())

    def zero_grad(self) -> None:
        for p in self.parameters():
            p.zero_grad()

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self.named_parameters()}

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        own = dict(self.named_parameters())
        missing = sorted(set(own) - set(state))
        unexpected = sorted(set(state) - set(own))
        if missing or unexpected:
            raise CheckpointError(
                f"parameter names differ (missing: {missing}, unexpected: {unexpected})",
                field=(missing or unexpected)[0],
            )
        for name, p in own.items():
            values = np.asarray(state[name], dtype=np.float64)
            if values.shape != p.shape:
                raise CheckpointError(f"'{name}' has shape {values.shape}, expected {p.shape}", field=name)
            p.data[...] = values


def prefixed(prefix: str, named: List[Tuple[str, Parameter]]) -> List[Tuple[str, Parameter]]:
    return [(f"{prefix}.{name}", p) for name, p in named]

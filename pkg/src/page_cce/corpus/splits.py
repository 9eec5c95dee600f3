"""
Seeded by-conversation splits.
"""
from typing import List, Sequence, Tuple

import numpy as np

from .models import Conversation


def split_corpus(
    conversations: Sequence[Conversation],
    fraction: float,
    seed: int,
) -> Tuple[List[Conversation], List[Conversation]]:
    """Hold out ``fraction`` of the conversations (at least one when fraction > 0).

    Returns (kept, held_out); both keep the original order.
    """
    n = len(conversations)
    if fraction <= 0 or n < 2:
        return list(conversations), []
    n_held = min(n - 1, max(1, int(round(n * fraction))))
    order = np.random.default_rng(seed).permutation(n)
    held = set(int(i) for i in order[:n_held])
    kept = [c for i, c in enumerate(conversations) if i not in held]
    held_out = [c for i, c in enumerate(conversations) if i in held]
    return kept, held_out

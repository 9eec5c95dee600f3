"""
Checkpoint files: named float64 tensors plus JSON metadata.

Layout::

    {
      "format": "page-cce-checkpoint",
      "version": 1,
      "metadata": {...},
      "tensors": {"name": {"shape": [..], "dtype": "<f8", "data": "<base64>"}}
    }

Values are stored as little-endian float64 bytes, so a save/load round trip is
bit-exact.
"""
import base64
import json
from pathlib import Path
from typing import Any, Dict, Mapping, Tuple, Union

import numpy as np

from ..exceptions import CheckpointError

CHECKPOINT_FORMAT = "page-cce-checkpoint"
CHECKPOINT_VERSION = 1


def save_checkpoint(
    path: Union[str, Path],
    tensors: Mapping[str, np.ndarray],
    metadata: Mapping[str, Any],
) -> None:
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "metadata": dict(metadata),
        "tensors": {
            name: {
                "shape": list(array.shape),
                "dtype": "<f8",
                "data": base64.b64encode(np.ascontiguousarray(array, dtype="<f8").tobytes()).decode("ascii"),
            }
            for name, array in tensors.items()
        },
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")


def load_checkpoint(path: Union[str, Path]) -> Tuple[Dict[str, np.ndarray], Dict[str, Any]]:
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"Checkpoint not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CheckpointError(f"Checkpoint {path} is not valid JSON: {e}") from e
    if payload.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"{path} is not a page-cce checkpoint", field="format")

    tensors: Dict[str, np.ndarray] = {}
    for name, entry in payload.get("tensors", {}).items():
        raw = base64.b64decode(entry["data"])
        array = np.frombuffer(raw, dtype=entry.get("dtype", "<f8")).astype(np.float64)
        shape = tuple(entry["shape"])
        if array.size != int(np.prod(shape)):
            raise CheckpointError(f"Tensor '{name}' has {array.size} values for shape {shape}", field=name)
        tensors[name] = array.reshape(shape)
    return tensors, payload.get("metadata", {})

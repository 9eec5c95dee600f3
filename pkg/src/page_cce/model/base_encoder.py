"""
Base utterance encoders: the pluggable stage that turns an utterance into a
vector before projection.

Two implementations ship with the library:
- ``HashEmbeddingEncoder``: average of learned bucket embeddings of the
  lowercased whitespace tokens (FNV-1a token hashing, no vocabulary).
  Averaging makes it invariant to token order.
- ``PrecomputedEncoder``: returns vectors supplied with the corpus
  (e.g. from an external sentence encoder).
"""
from __future__ import annotations

from typing import List, Protocol, Sequence, Tuple, runtime_checkable

import numpy as np

from ..config import EncoderConfig
from ..corpus.models import Utterance
from ..exceptions import EncodingError
from ..numerics import Parameter, Tensor, matmul, normal, take_rows
from .module import Module

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a_64(token: str) -> int:
    """64-bit FNV-1a hash of the UTF-8 bytes of ``token``."""
    h = _FNV_OFFSET
    for byte in token.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def tokenize(text: str) -> List[str]:
    return text.lower().split()


@runtime_checkable
class BaseEncoder(Protocol):
    """Maps a conversation's utterances to a k x output_dim matrix."""

    @property
    def encoder_name(self) -> str:
        """Short name like 'hash' or 'precomputed'."""
        ...

    @property
    def output_dim(self) -> int:
        ...

    def encode(self, utterances: Sequence[Utterance]) -> Tensor:
        """Return one row per utterance, in order.

        Raises:
            EncodingError: If an utterance carries nothing this encoder can use.
        """
        ...

    def named_parameters(self) -> List[Tuple[str, Parameter]]:
        ...


class HashEmbeddingEncoder(Module):
    """Bag of hashed tokens, averaged."""

    def __init__(self, buckets: int, dim: int, rng: np.random.Generator):
        self.buckets = buckets
        self.dim = dim
        self.table = normal(rng, (buckets, dim), std=0.02, name="table")

    @property
    def encoder_name(self) -> str:
        return "hash"

    @property
    def output_dim(self) -> int:
        return self.dim

    def bucket_ids(self, text: str) -> List[int]:
        return [fnv1a_64(token) % self.buckets for token in tokenize(text)]

    def encode(self, utterances: Sequence[Utterance]) -> Tensor:
        ids: List[int] = []
        rows: List[Tuple[int, int]] = []
        for u in utterances:
            u_ids = self.bucket_ids(u.text)
            if not u_ids:
                raise EncodingError(
                    f"utterance {u.index} has no text to hash; use the precomputed encoder for vector-only input"
                )
            rows.append((len(ids), len(ids) + len(u_ids)))
            ids.extend(u_ids)
        averaging = np.zeros((len(utterances), len(ids)))
        for row, (start, stop) in enumerate(rows):
            averaging[row, start:stop] = 1.0 / (stop - start)
        return matmul(Tensor(averaging), take_rows(self.table, ids))

    def named_parameters(self) -> List[Tuple[str, Parameter]]:
        return [("table", self.table)]


class PrecomputedEncoder(Module):
    """Passes through vectors attached to the utterances."""

    def __init__(self, dim: int):
        self.dim = dim

    @property
    def encoder_name(self) -> str:
        return "precomputed"

    @property
    def output_dim(self) -> int:
        return self.dim

    def encode(self, utterances: Sequence[Utterance]) -> Tensor:
        vectors = []
        for u in utterances:
            if u.precomputed_vector is None:
                raise EncodingError(f"utterance {u.index} has no precomputed vector")
            if len(u.precomputed_vector) != self.dim:
                raise EncodingError(
                    f"utterance {u.index} vector has {len(u.precomputed_vector)} values, expected {self.dim}"
                )
            vectors.append(u.precomputed_vector)
        return Tensor(np.array(vectors, dtype=np.float64).reshape(len(utterances), self.dim))


def create_base_encoder(config: EncoderConfig, rng: np.random.Generator) -> BaseEncoder:
    if config.mode == "hash":
        return HashEmbeddingEncoder(config.buckets, config.base_dim, rng)
    return PrecomputedEncoder(config.base_dim)


def encode_base(utterance: Utterance, encoder: BaseEncoder) -> Tensor:
    """Base vector of a single utterance, shape 1 x output_dim."""
    return encoder.encode([utterance])

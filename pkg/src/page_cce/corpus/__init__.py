"""
Conversation corpora: data model, readers/writers, pair enumeration and
synthetic planted-cause generation.

Example:
    from page_cce.corpus import parse_corpus, enumerate_pairs, corpus_stats

    conversations = parse_corpus("data/dailydialog_test.json", format="reccon")
    print(corpus_stats(conversations).to_dict())
    pairs = enumerate_pairs(conversations[0])
"""
from .models import NEUTRAL, UNK_EMOTION, Conversation, Utterance
from .pairs import CorpusStats, candidate_pairs, corpus_stats, enumerate_pairs, validate_pairs
from .reader import (
    conversation_from_native,
    conversation_from_reccon,
    dumps_corpus,
    loads_corpus,
    parse_corpus,
    write_corpus,
)
from .splits import split_corpus
from .synthetic import SyntheticSpec, generate_synthetic, shuffle_labels

__all__ = [
    # Models
    "NEUTRAL",
    "UNK_EMOTION",
    "Utterance",
    "Conversation",
    # Pairs
    "enumerate_pairs",
    "candidate_pairs",
    "validate_pairs",
    "CorpusStats",
    "corpus_stats",
    # Readers / writers
    "parse_corpus",
    "loads_corpus",
    "dumps_corpus",
    "write_corpus",
    "conversation_from_native",
    "conversation_from_reccon",
    # Splits
    "split_corpus",
    # Synthetic
    "SyntheticSpec",
    "generate_synthetic",
    "shuffle_labels",
]

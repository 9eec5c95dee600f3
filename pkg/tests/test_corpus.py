"""
Tests for the corpus data model, readers and pair enumeration.
"""
import json

import pytest

from page_cce.corpus import (
    Conversation,
    candidate_pairs,
    conversation_from_reccon,
    corpus_stats,
    enumerate_pairs,
    loads_corpus,
    parse_corpus,
    split_corpus,
    validate_pairs,
    write_corpus,
)
from page_cce.exceptions import CorpusError


def make_entry(emotions, causes=None, conv_id="c1", speakers=None, pairs=None) -> dict:
    """Helper to create a native corpus entry."""
    speakers = speakers or ["A" if i % 2 == 0 else "B" for i in range(len(emotions))]
    entry = {
        "id": conv_id,
        "utterances": [
            {"idx": i + 1, "speaker": speakers[i], "text": f"utterance {i + 1}", "emotion": e}
            for i, e in enumerate(emotions)
        ],
        "causes": causes or {},
    }
    if pairs is not None:
        entry["pairs"] = pairs
    return entry


def make_conversation(emotions, causes=None, **kwargs) -> Conversation:
    return loads_corpus(json.dumps([make_entry(emotions, causes, **kwargs)]))[0]


class TestConversationModel:
    """Validation of the conversation model."""

    def test_indices_must_be_contiguous(self):
        """Utterance indices must run 1..k."""
        entry = make_entry(["neutral", "joy"])
        entry["utterances"][1]["idx"] = 3
        with pytest.raises(CorpusError):
            loads_corpus(json.dumps([entry]))

    def test_emotion_is_normalized(self):
        """Emotion labels are lowercased and stripped."""
        conv = make_conversation(["Neutral ", "JOY"])
        assert conv.emotions == ["neutral", "joy"]
        assert conv.targets == [2]

    def test_to_dict_uses_native_keys(self):
        """Serialization uses idx/causes with string target keys."""
        conv = make_conversation(["neutral", "joy"], {"2": [1, 2]})
        data = conv.to_dict()
        assert data["causes"] == {"2": [1, 2]}
        assert data["utterances"][0]["idx"] == 1


class TestCauseCleaning:
    """Reader-side handling of questionable annotations."""

    def test_future_causes_dropped(self, caplog):
        """A cause after its target is dropped with a warning."""
        conv = make_conversation(["neutral", "joy", "neutral"], {"2": [1, 3]})
        assert conv.gold_causes == {2: [1]}
        assert "future cause" in caplog.text

    def test_neutral_target_causes_dropped(self):
        """Causes attached to a neutral utterance are ignored."""
        conv = make_conversation(["neutral", "neutral"], {"2": [1]})
        assert conv.gold_causes == {}

    def test_cause_below_one_rejected(self):
        """Cause index 0 is malformed."""
        with pytest.raises(CorpusError):
            make_conversation(["neutral", "joy"], {"2": [0]})

    def test_malformed_json(self):
        """Malformed JSON raises CorpusError."""
        with pytest.raises(CorpusError):
            loads_corpus("[{")

    def test_missing_file(self, tmp_path):
        """A missing corpus file raises CorpusError."""
        with pytest.raises(CorpusError):
            parse_corpus(tmp_path / "missing.json")


class TestPairs:
    """Candidate-pair enumeration."""

    def test_enumeration_order_and_self_pairs(self):
        """Pairs run t ascending then o ascending, self-pairs included."""
        conv = make_conversation(["joy", "neutral", "anger"], {"1": [1], "3": [2]})
        pairs = [(p.o, p.t, p.label) for p in enumerate_pairs(conv)]
        assert pairs == [(1, 1, True), (1, 3, False), (2, 3, True), (3, 3, False)]

    def test_all_neutral_has_no_pairs(self):
        """A conversation without targets yields no pairs."""
        assert enumerate_pairs(make_conversation(["neutral", "neutral"])) == []

    def test_pair_count_is_sum_of_target_positions(self):
        """Each target t contributes t pairs."""
        conv = make_conversation(["neutral", "joy", "neutral", "sadness", "anger"])
        assert len(enumerate_pairs(conv)) == 2 + 4 + 5

    def test_explicit_pairs_take_precedence(self):
        """An explicit pair list replaces enumeration."""
        conv = make_conversation(["neutral", "joy"], {"2": [1]}, pairs=[[2, 2, False], [1, 2, True]])
        assert [(p.o, p.t, p.label) for p in candidate_pairs(conv)] == [(1, 2, True), (2, 2, False)]

    def test_strict_mode_rejects_mislabeled_pair(self):
        """Strict validation compares explicit labels with gold causes."""
        conv = make_conversation(["neutral", "joy"], {"2": [1]}, pairs=[[1, 2, False]])
        with pytest.raises(CorpusError):
            validate_pairs(conv)

    def test_strict_mode_rejects_non_target_pair(self):
        """Explicit pairs must target a non-neutral utterance."""
        conv = make_conversation(["neutral", "joy", "neutral"], {"2": [1]}, pairs=[[1, 3, False]])
        with pytest.raises(CorpusError):
            validate_pairs(conv)


class TestStats:
    """Corpus statistics."""

    def test_counts(self):
        """Conversations, utterances and pair counts."""
        convs = [
            make_conversation(["neutral", "joy"], {"2": [1]}, conv_id="a"),
            make_conversation(["anger", "neutral", "joy"], {"1": [1], "3": [1, 3]}, conv_id="b"),
        ]
        stats = corpus_stats(convs)
        assert stats.to_dict() == {
            "conversations": 2,
            "utterances": 5,
            "avg_length": 2.5,
            "positive_pairs": 4,
            "negative_pairs": 2,
        }


class TestReccon:
    """RECCON original-annotation adapter."""

    def test_nested_turns_and_evidence(self):
        """Nested turn lists are unwrapped and non-index evidence is skipped."""
        turns = [[
            {"turn": 1, "speaker": "A", "utterance": "I won!", "emotion": "happiness",
             "expanded emotion cause evidence": [1]},
            {"turn": 2, "speaker": "B", "utterance": "Great.", "emotion": "neutral"},
            {"turn": 3, "speaker": "A", "utterance": "Thanks!", "emotion": "happiness",
             "expanded emotion cause evidence": [1, "b", 3]},
        ]]
        conv = conversation_from_reccon("tr_1", turns)
        assert conv.k == 3
        assert conv.gold_causes == {1: [1], 3: [1, 3]}

    def test_loads_reccon_object(self):
        """The RECCON format is an object keyed by conversation id."""
        payload = {"dd_1": [[{"turn": 1, "speaker": "A", "utterance": "hi", "emotion": "neutral"}]]}
        convs = loads_corpus(json.dumps(payload), format="reccon")
        assert [c.id for c in convs] == ["dd_1"]


class TestWriteAndSplit:
    """Native writer and seeded splits."""

    def test_write_then_parse(self, tmp_path):
        """Written corpora parse back to equal conversations."""
        convs = [make_conversation(["neutral", "joy"], {"2": [1, 2]})]
        write_corpus(convs, tmp_path / "out.json")
        assert parse_corpus(tmp_path / "out.json") == convs

    def test_split_is_seeded_and_disjoint(self):
        """Same seed, same split; kept and held-out partition the input."""
        convs = [make_conversation(["neutral", "joy"], conv_id=f"c{i}") for i in range(20)]
        kept, held = split_corpus(convs, 0.15, seed=4)
        again = split_corpus(convs, 0.15, seed=4)
        assert (kept, held) == again
        assert len(held) == 3
        assert {c.id for c in kept} | {c.id for c in held} == {c.id for c in convs}
        assert not {c.id for c in kept} & {c.id for c in held}

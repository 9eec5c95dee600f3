"""
Corpus readers and writers.

Two input formats are supported:

- ``native``: a JSON array of conversations as described in
  ``page_cce.corpus.models``.
- ``reccon``: the RECCON original-annotation release, a JSON object mapping a
  conversation id to its turns (optionally wrapped in one extra list)::

      {"tr_4_1": [[{"turn": 1, "speaker": "A", "utterance": "...",
                    "emotion": "happiness",
                    "expanded emotion cause evidence": [1, "b"]}, ...]]}

  Non-numeric evidence entries carry no utterance index and are skipped.

In both formats, causes that point after their target are dropped with a
warning, as are causes attached to neutral utterances.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Sequence, Union

from pydantic import ValidationError

from ..exceptions import CorpusError
from .models import NEUTRAL, Conversation
from .pairs import validate_pairs

logger = logging.getLogger(__name__)

CorpusFormat = Literal["native", "reccon"]

RECCON_EVIDENCE_KEY = "expanded emotion cause evidence"


def _clean_causes(conv_id: str, raw: Dict[Any, Sequence[Any]], emotions: Dict[int, str]) -> Dict[int, List[int]]:
    cleaned: Dict[int, List[int]] = {}
    for raw_t, raw_causes in raw.items():
        try:
            t = int(raw_t)
        except (TypeError, ValueError) as e:
            raise CorpusError(f"cause target '{raw_t}' is not an index", conversation_id=conv_id, cause=e) from e
        if emotions.get(t, NEUTRAL) == NEUTRAL:
            logger.warning("Conversation %s: dropping causes of neutral or unknown target %s", conv_id, t)
            continue
        kept: List[int] = []
        for c in raw_causes:
            if isinstance(c, bool) or not isinstance(c, (int, str)) or not str(c).lstrip("-").isdigit():
                logger.debug("Conversation %s: skipping non-index evidence %r for target %s", conv_id, c, t)
                continue
            c = int(c)
            if c > t:
                logger.warning("Conversation %s: dropping future cause %s of target %s", conv_id, c, t)
                continue
            if c < 1:
                raise CorpusError(f"cause index {c} of target {t} is below 1", conversation_id=conv_id)
            if c not in kept:
                kept.append(c)
        if kept:
            cleaned[t] = sorted(kept)
    return cleaned


def _build(conv_id: str, data: Dict[str, Any]) -> Conversation:
    try:
        return Conversation.model_validate(data)
    except ValidationError as e:
        raise CorpusError(f"invalid conversation: {e}", conversation_id=conv_id, cause=e) from e


def conversation_from_native(entry: Dict[str, Any]) -> Conversation:
    if not isinstance(entry, dict) or "id" not in entry:
        raise CorpusError("each conversation must be an object with an 'id'")
    conv_id = str(entry["id"])
    utterances = entry.get("utterances")
    if not isinstance(utterances, list):
        raise CorpusError("'utterances' must be a list", conversation_id=conv_id)
    emotions = {}
    for u in utterances:
        if isinstance(u, dict) and "idx" in u:
            try:
                emotions[int(u["idx"])] = str(u.get("emotion", "")).strip().lower()
            except (TypeError, ValueError):
                continue  # left for model validation to report
    data = dict(entry, id=conv_id)
    data["causes"] = _clean_causes(conv_id, entry.get("causes", {}) or {}, emotions)
    return _build(conv_id, data)


def conversation_from_reccon(conv_id: str, turns: Sequence[Any]) -> Conversation:
    if turns and isinstance(turns[0], list):
        turns = turns[0]
    utterances = []
    raw_causes: Dict[int, List[Any]] = {}
    emotions: Dict[int, str] = {}
    for turn in turns:
        if not isinstance(turn, dict):
            raise CorpusError("turns must be objects", conversation_id=conv_id)
        try:
            index = int(turn["turn"])
            emotion = str(turn["emotion"])
        except (KeyError, TypeError, ValueError) as e:
            raise CorpusError(f"turn is missing 'turn' or 'emotion': {turn}", conversation_id=conv_id, cause=e) from e
        utterances.append(
            {
                "idx": index,
                "speaker": str(turn.get("speaker", "")),
                "text": str(turn.get("utterance", "")),
                "emotion": emotion,
            }
        )
        emotions[index] = emotion.strip().lower()
        evidence = turn.get(RECCON_EVIDENCE_KEY)
        if evidence:
            raw_causes[index] = list(evidence)
    causes = _clean_causes(conv_id, raw_causes, emotions)
    return _build(conv_id, {"id": conv_id, "utterances": utterances, "causes": causes})


def loads_corpus(text: str, format: CorpusFormat = "native", strict: bool = False) -> List[Conversation]:
    """Parse corpus JSON text."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise CorpusError(f"malformed corpus JSON: {e}", cause=e) from e

    if format == "native":
        if not isinstance(payload, list):
            raise CorpusError("native corpus must be a JSON array of conversations")
        conversations = [conversation_from_native(entry) for entry in payload]
    elif format == "reccon":
        if not isinstance(payload, dict):
            raise CorpusError("RECCON corpus must be a JSON object keyed by conversation id")
        conversations = [conversation_from_reccon(str(cid), turns) for cid, turns in payload.items()]
    else:
        raise CorpusError(f"unknown corpus format '{format}'")

    if strict:
        for conv in conversations:
            validate_pairs(conv)
    return conversations


def parse_corpus(path: Union[str, Path], format: CorpusFormat = "native", strict: bool = False) -> List[Conversation]:
    """Read and validate a corpus file."""
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"corpus file not found: {path}")
    conversations = loads_corpus(path.read_text(encoding="utf-8"), format=format, strict=strict)
    logger.info("Loaded %d conversations from %s", len(conversations), path)
    return conversations


def dumps_corpus(conversations: Sequence[Conversation]) -> str:
    return json.dumps([conv.to_dict() for conv in conversations], indent=2, ensure_ascii=False)


def write_corpus(conversations: Sequence[Conversation], path: Union[str, Path]) -> None:
    """Write conversations in the native format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_corpus(conversations) + "\n", encoding="utf-8")

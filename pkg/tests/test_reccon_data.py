"""
Corpus counts on the public RECCON test files.

Set PAGE_CCE_RECCON_DIR to a directory holding ``dailydialog_test.json`` and
``iemocap_test.json`` (the original-annotation files); otherwise the tests skip.
"""
import os
from pathlib import Path

import pytest

from page_cce.corpus import corpus_stats, parse_corpus

RECCON_DIR = Path(os.environ.get("PAGE_CCE_RECCON_DIR", ""))


@pytest.mark.parametrize(
    "file_name,expected",
    [
        ("dailydialog_test.json", (225, 2405, 1894, 26814)),
        ("iemocap_test.json", (16, 665, 1080, 11305)),
    ],
)
def test_reccon_test_counts(file_name, expected):
    """Conversation, utterance and pair counts match the published table."""
    path = RECCON_DIR / file_name
    if not os.environ.get("PAGE_CCE_RECCON_DIR") or not path.exists():
        pytest.skip(f"{file_name} not available")
    stats = corpus_stats(parse_corpus(path, format="reccon"))
    assert (stats.conversations, stats.utterances, stats.positive_pairs, stats.negative_pairs) == expected

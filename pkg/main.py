#!/usr/bin/env python3
"""Run the page-cce command line from a source checkout: ``python main.py train --data corpus.json``."""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "src"))

from page_cce.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())

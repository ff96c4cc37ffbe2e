from __future__ import annotations

from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parent.parent
LOG_DIR = PROJECT_ROOT / "logs"
OUTPUT_DIR = PROJECT_ROOT / "reports"
CORPUS_PATH = PROJECT_ROOT / "corpus" / "worked_examples.json"

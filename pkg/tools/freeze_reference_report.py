#!/usr/bin/env python3
"""Regenerate the pinned self-consistency report for the gold mini-corpus.

Run after any deliberate change to rules, lexicons, gazetteer, thesaurus or
gold texts:  python3 tools/freeze_reference_report.py
"""

import json
from pathlib import Path

from geodoc.config import PipelineConfig
from geodoc.evaluation import MatchMode, corpus_stats, load_gold_dir, score
from geodoc.goldpipe import annotate_gold_corpus
from geodoc.pipeline import Resources

GOLD = Path(__file__).resolve().parents[1] / "src" / "geodoc" / "resources" / "gold"


def main() -> None:
    res = Resources.load(PipelineConfig())
    gold = load_gold_dir(GOLD)
    pred = annotate_gold_corpus(gold, res)
    out = {
        "corpusStats": corpus_stats(gold),
        "reports": {
            mode.value: score(gold, pred, mode).to_dict()
            for mode in (MatchMode.EXACT_SPAN, MatchMode.OVERLAP)
        },
    }
    path = GOLD / "reference_report.json"
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()

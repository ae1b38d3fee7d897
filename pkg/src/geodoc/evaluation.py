"""Span-level scoring of predicted annotations against gold annotations."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class Category(str, Enum):
    ESA = "ESA"
    ESR = "ESR"
    ORGANIZATION = "Organization"
    TEMPORAL = "Temporal"
    THEMATIC = "Thematic"


class MatchMode(str, Enum):
    EXACT_SPAN = "ExactSpan"
    OVERLAP = "Overlap"


class UnknownDocId(Exception):
    pass


@dataclass(frozen=True)
class GoldSpan:
    start: int
    end: int
    category: Category
    surface: str = ""


@dataclass
class GoldDocument:
    doc_id: str
    text: str
    spans: list[GoldSpan] = field(default_factory=list)

    def __post_init__(self):
        for s in self.spans:
            if not (0 <= s.start < s.end <= len(self.text)):
                raise ValueError(f"{self.doc_id}: span {s} outside text bounds")


@dataclass
class CategoryScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float | None:
        d = self.tp + self.fp
        return self.tp / d if d else None

    @property
    def recall(self) -> float | None:
        d = self.tp + self.fn
        return self.tp / d if d else None

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        if p is None or r is None or p + r == 0:
            return 0.0
        return 2 * p * r / (p + r)


@dataclass
class EvalReport:
    mode: MatchMode
    per_category: dict[Category, CategoryScore] = field(default_factory=dict)

    def overall(self) -> CategoryScore:
        agg = CategoryScore()
        for s in self.per_category.values():
            agg.tp += s.tp
            agg.fp += s.fp
            agg.fn += s.fn
        return agg

    def to_dict(self) -> dict:
        def fmt(s: CategoryScore) -> dict:
            return {
                "tp": s.tp,
                "fp": s.fp,
                "fn": s.fn,
                "precision": s.precision,
                "recall": s.recall,
                "f1": round(s.f1, 6),
            }

        return {
            "mode": self.mode.value,
            "categories": {c.value: fmt(s) for c, s in sorted(self.per_category.items(), key=lambda kv: kv[0].value)},
            "overall": fmt(self.overall()),
        }

    def to_table(self) -> str:
        rows = [("Category", "TP", "FP", "FN", "Precision", "Recall", "F-Measure")]
        def pct(v: float | None) -> str:
            return "-" if v is None else f"{100 * v:.0f}%"
        for cat in sorted(self.per_category, key=lambda c: c.value):
            s = self.per_category[cat]
            rows.append((cat.value, str(s.tp), str(s.fp), str(s.fn),
                         pct(s.precision), pct(s.recall), f"{s.f1:.3f}"))
        o = self.overall()
        rows.append(("Overall", str(o.tp), str(o.fp), str(o.fn),
                     pct(o.precision), pct(o.recall), f"{o.f1:.3f}"))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = []
        for i, r in enumerate(rows):
            lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
            if i == 0:
                lines.append("-" * (sum(widths) + 2 * (len(widths) - 1)))
        return "\n".join(lines)


def f_measure(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _spans_match(g: GoldSpan, p: GoldSpan, mode: MatchMode) -> bool:
    if g.category != p.category:
        return False
    if mode == MatchMode.EXACT_SPAN:
        return g.start == p.start and g.end == p.end
    return g.start < p.end and p.start < g.end


def score(
    gold: list[GoldDocument],
    predicted: dict[str, list[GoldSpan]],
    mode: MatchMode = MatchMode.EXACT_SPAN,
) -> EvalReport:
    """Greedy one-to-one matching in span-position order, per category.

    Every predicted doc id must exist in the gold set.
    """
    gold_ids = {g.doc_id for g in gold}
    for doc_id in predicted:
        if doc_id not in gold_ids:
            raise UnknownDocId(doc_id)
    report = EvalReport(mode=mode)
    for cat in Category:
        report.per_category[cat] = CategoryScore()
    for gdoc in gold:
        preds = sorted(predicted.get(gdoc.doc_id, []), key=lambda s: (s.start, s.end))
        golds = sorted(gdoc.spans, key=lambda s: (s.start, s.end))
        used: set[int] = set()
        for g in golds:
            matched = False
            for i, p in enumerate(preds):
                if i in used:
                    continue
                if _spans_match(g, p, mode):
                    used.add(i)
                    matched = True
                    break
            sc = report.per_category[g.category]
            if matched:
                sc.tp += 1
            else:
                sc.fn += 1
        for i, p in enumerate(preds):
            if i not in used:
                report.per_category[p.category].fp += 1
    return report


_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


def corpus_stats(gold: list[GoldDocument]) -> dict:
    """Word and per-category span counts over a gold corpus."""
    words = sum(len(_WORD_RE.findall(g.text)) for g in gold)
    per_cat = {c.value: 0 for c in Category}
    for g in gold:
        for s in g.spans:
            per_cat[s.category.value] += 1
    return {
        "documents": len(gold),
        "words": words,
        "meanWords": words / len(gold) if gold else 0.0,
        "spans": per_cat,
        "totalSpans": sum(per_cat.values()),
    }


# ------------------------------------------------------------- gold format

def load_gold_file(path: str | Path) -> GoldDocument:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return gold_from_dict(obj)


def gold_from_dict(obj: dict) -> GoldDocument:
    return GoldDocument(
        doc_id=obj["docId"],
        text=obj["text"],
        spans=[
            GoldSpan(
                start=s["start"],
                end=s["end"],
                category=Category(s["category"]),
                surface=s.get("surface", ""),
            )
            for s in obj["spans"]
        ],
    )


def load_gold_dir(path: str | Path) -> list[GoldDocument]:
    docs = []
    for p in sorted(Path(path).glob("*.json")):
        if p.name.startswith("_") or p.name == "reference_report.json":
            continue
        docs.append(load_gold_file(p))
    return docs

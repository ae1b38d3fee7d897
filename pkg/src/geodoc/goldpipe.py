"""Bridging helpers between annotated records and the scoring harness."""

from __future__ import annotations

from pathlib import Path

from .evaluation import Category, GoldDocument, GoldSpan
from .ingest import Document, SourceTag
from .modsti import ModsTiRecord, parse_mods_ti_xml
from .pipeline import Resources, annotate_document
from .spatial import SpatialKind


def spans_from_record(rec: ModsTiRecord) -> list[GoldSpan]:
    spans: list[GoldSpan] = []
    for e in rec.spatial:
        cat = Category.ESA if e.kind == SpatialKind.ABSOLUTE else Category.ESR
        spans.append(GoldSpan(e.start, e.end, cat, e.surface))
    for o in rec.organizations:
        spans.append(GoldSpan(o.start, o.end, Category.ORGANIZATION, o.surface))
    for t in rec.temporal:
        spans.append(GoldSpan(t.start, t.end, Category.TEMPORAL, t.surface))
    for th in rec.thematic:
        spans.append(GoldSpan(th.start, th.end, Category.THEMATIC, th.surface))
    return sorted(spans, key=lambda s: (s.start, s.end, s.category.value))


def predictions_from_records_dir(path: str | Path) -> dict[str, list[GoldSpan]]:
    out: dict[str, list[GoldSpan]] = {}
    for p in sorted(Path(path).glob("*.modsti.xml")):
        rec = parse_mods_ti_xml(p.read_bytes())
        out[rec.document.id] = spans_from_record(rec)
    return out


def annotate_gold_corpus(
    gold: list[GoldDocument], res: Resources, langs: dict[str, str] | None = None
) -> dict[str, list[GoldSpan]]:
    """Run the pipeline over gold texts and return predicted spans per doc.

    Language comes from `langs` when given, else from the doc id suffix
    convention (ids ending in -fr / -en), else detection.
    """
    from .ingest import detect_language

    predicted: dict[str, list[GoldSpan]] = {}
    for g in gold:
        if langs and g.doc_id in langs:
            lang = langs[g.doc_id]
        elif g.doc_id.endswith("-fr"):
            lang = "fr"
        elif g.doc_id.endswith("-en"):
            lang = "en"
        else:
            lang = detect_language(g.text, res.config.default_language)
        doc = Document(id=g.doc_id, source=SourceTag.OTHER, abstracts=[(lang, g.text)])
        rec = annotate_document(doc, res)
        predicted[g.doc_id] = spans_from_record(rec)
    return predicted

"""NDJSON index over annotated records, plus conjunctive query evaluation.

One JSON line per document; a separate summary object carries the document
count and per-stage timing totals. Rebuilding from the same records yields
byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .modsti import ModsTiRecord
from .spatial import SpatialKind
from .temporal import CalendarDate, TemporalCategory, date_bounds


class IoFailure(Exception):
    pass


@dataclass(frozen=True)
class SpatialPosting:
    gazetteer_id: int | None
    surface: str
    kind: str
    relation: str | None
    lat: float | None
    lon: float | None


@dataclass(frozen=True)
class TemporalPosting:
    category: str
    start: str  # ISO value
    end: str
    granularity: str


@dataclass(frozen=True)
class ThematicPosting:
    concept: str
    broader: tuple[str, ...]


@dataclass(frozen=True)
class IndexEntry:
    doc_id: str
    title: str
    languages: tuple[str, ...]
    source: str
    spatial: tuple[SpatialPosting, ...]
    temporal: tuple[TemporalPosting, ...]
    thematic: tuple[ThematicPosting, ...]


def entry_from_record(rec: ModsTiRecord) -> IndexEntry:
    spatial = tuple(
        SpatialPosting(
            gazetteer_id=e.footprint.gazetteer_id if e.footprint else None,
            surface=e.surface,
            kind=e.kind.value,
            relation=e.relation.value if e.relation else None,
            lat=e.footprint.lat if e.footprint else None,
            lon=e.footprint.lon if e.footprint else None,
        )
        for e in rec.spatial
    )
    temporal = []
    for t in rec.temporal:
        end = t.value_end if t.category == TemporalCategory.PERIOD else t.value_start
        temporal.append(
            TemporalPosting(
                category=t.category.value,
                start=t.value_start.iso(),
                end=(end or t.value_start).iso(),
                granularity=t.value_start.granularity.value,
            )
        )
    thematic = tuple(
        ThematicPosting(concept=th.concept, broader=th.broader_chain) for th in rec.thematic
    )
    return IndexEntry(
        doc_id=rec.document.id,
        title=rec.document.title,
        languages=tuple(rec.document.languages),
        source=rec.document.source.value,
        spatial=spatial,
        temporal=tuple(temporal),
        thematic=thematic,
    )


def _entry_to_json(e: IndexEntry) -> str:
    obj = {
        "docId": e.doc_id,
        "title": e.title,
        "languages": list(e.languages),
        "source": e.source,
        "spatial": [
            {
                "gazetteerId": p.gazetteer_id,
                "surface": p.surface,
                "kind": p.kind,
                "relation": p.relation,
                "lat": p.lat,
                "lon": p.lon,
            }
            for p in e.spatial
        ],
        "temporal": [
            {
                "category": p.category,
                "start": p.start,
                "end": p.end,
                "granularity": p.granularity,
            }
            for p in e.temporal
        ],
        "thematic": [
            {"concept": p.concept, "broader": list(p.broader)} for p in e.thematic
        ],
    }
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def entry_from_json(line: str) -> IndexEntry:
    obj = json.loads(line)
    return IndexEntry(
        doc_id=obj["docId"],
        title=obj["title"],
        languages=tuple(obj["languages"]),
        source=obj["source"],
        spatial=tuple(
            SpatialPosting(
                gazetteer_id=p["gazetteerId"],
                surface=p["surface"],
                kind=p["kind"],
                relation=p["relation"],
                lat=p["lat"],
                lon=p["lon"],
            )
            for p in obj["spatial"]
        ),
        temporal=tuple(
            TemporalPosting(
                category=p["category"],
                start=p["start"],
                end=p["end"],
                granularity=p["granularity"],
            )
            for p in obj["temporal"]
        ),
        thematic=tuple(
            ThematicPosting(concept=p["concept"], broader=tuple(p["broader"]))
            for p in obj["thematic"]
        ),
    )


@dataclass
class IndexSummary:
    document_count: int
    stage_seconds: dict[str, float] = field(default_factory=dict)
    total_seconds: float = 0.0

    def to_json(self) -> str:
        return json.dumps(
            {
                "documentCount": self.document_count,
                "stageSeconds": self.stage_seconds,
                "totalSeconds": self.total_seconds,
                "secondsPerDocument": (
                    self.total_seconds / self.document_count if self.document_count else 0.0
                ),
            },
            sort_keys=True,
        )


def build_index(
    records: Iterable[ModsTiRecord],
    out: str | Path,
    stage_seconds: dict[str, float] | None = None,
    total_seconds: float | None = None,
) -> IndexSummary:
    """Write one NDJSON line per record (input order preserved) and a
    summary beside the index at <out>.summary.json."""
    out = Path(out)
    count = 0
    stage_totals = dict(stage_seconds or {})
    try:
        with open(out, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(_entry_to_json(entry_from_record(rec)))
                fh.write("\n")
                count += 1
                for stage, secs in rec.provenance.timings:
                    if stage_seconds is None:
                        stage_totals[stage] = stage_totals.get(stage, 0.0) + secs
        summary = IndexSummary(
            document_count=count,
            stage_seconds=stage_totals,
            total_seconds=total_seconds if total_seconds is not None else sum(stage_totals.values()),
        )
        out.with_suffix(out.suffix + ".summary.json").write_text(
            summary.to_json() + "\n", encoding="utf-8"
        )
        return summary
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def load_index(path: str | Path) -> list[IndexEntry]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return [entry_from_json(ln) for ln in lines if ln.strip()]


@dataclass(frozen=True)
class Query:
    place_ids: frozenset[int] | None = None
    bbox: tuple[float, float, float, float] | None = None  # min_lat, min_lon, max_lat, max_lon
    period: tuple[str, str] | None = None  # ISO value strings, inclusive overlap
    concept_ids: frozenset[str] | None = None  # matches direct or broader
    free_text: str | None = None


def _period_overlaps(p: TemporalPosting, q_start: str, q_end: str) -> bool:
    lo = date_bounds(CalendarDate.from_iso(p.start))[0]
    hi = date_bounds(CalendarDate.from_iso(p.end))[1]
    q_lo = date_bounds(CalendarDate.from_iso(q_start))[0]
    q_hi = date_bounds(CalendarDate.from_iso(q_end))[1]
    return lo <= q_hi and q_lo <= hi


def _match_counts(e: IndexEntry, q: Query) -> int | None:
    """Number of postings matching the query, or None if any provided
    dimension fails (conjunctive semantics)."""
    score = 0
    if q.place_ids is not None:
        hits = sum(1 for p in e.spatial if p.gazetteer_id in q.place_ids)
        if hits == 0:
            return None
        score += hits
    if q.bbox is not None:
        min_lat, min_lon, max_lat, max_lon = q.bbox
        hits = sum(
            1
            for p in e.spatial
            if p.lat is not None
            and p.lon is not None
            and min_lat <= p.lat <= max_lat
            and min_lon <= p.lon <= max_lon
        )
        if hits == 0:
            return None
        score += hits
    if q.period is not None:
        hits = sum(1 for p in e.temporal if _period_overlaps(p, *q.period))
        if hits == 0:
            return None
        score += hits
    if q.concept_ids is not None:
        hits = sum(
            1
            for p in e.thematic
            if p.concept in q.concept_ids or any(b in q.concept_ids for b in p.broader)
        )
        if hits == 0:
            return None
        score += hits
    if q.free_text is not None:
        needle = q.free_text.lower()
        hits = int(needle in e.title.lower()) + sum(
            1 for p in e.spatial if needle in p.surface.lower()
        )
        if hits == 0:
            return None
        score += hits
    return score


def query_index(entries: list[IndexEntry], q: Query) -> list[tuple[str, int]]:
    """Ranked (docId, match count), matches descending then docId ascending."""
    scored = []
    for e in entries:
        s = _match_counts(e, q)
        if s is not None:
            scored.append((e.doc_id, s))
    return sorted(scored, key=lambda t: (-t[1], t[0]))

"""The annotated-record XML format: core metadata plus three annotation
sub-trees, with deterministic byte output and an exact parse inverse."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path

from . import dtd as dtdmod
from .ingest import Document, SourceTag
from .spatial import (
    Footprint,
    IndicatorCategory,
    OrganizationEntity,
    SpatialEntity,
    SpatialIndicator,
    SpatialKind,
)
from .temporal import TemporalCategory, TemporalEntity, parse_value
from .thematic import MatchedVia, ThematicEntity

PIPELINE_VERSION = "0.1.0"


class SchemaViolation(Exception):
    def __init__(self, message: str, element_path: str = ""):
        super().__init__(f"{element_path}: {message}" if element_path else message)
        self.element_path = element_path


@dataclass
class Provenance:
    version: str = PIPELINE_VERSION
    timings: list[tuple[str, float]] = field(default_factory=list)


@dataclass
class ModsTiRecord:
    document: Document
    spatial: list[SpatialEntity] = field(default_factory=list)
    organizations: list[OrganizationEntity] = field(default_factory=list)
    temporal: list[TemporalEntity] = field(default_factory=list)
    thematic: list[ThematicEntity] = field(default_factory=list)
    provenance: Provenance = field(default_factory=Provenance)


def _fnum(x: float) -> str:
    return repr(float(x))


def _sorted_spatial(entities: list[SpatialEntity]) -> list[SpatialEntity]:
    return sorted(entities, key=lambda e: (e.start, e.end, e.kind.value))


def to_mods_ti_xml(rec: ModsTiRecord) -> bytes:
    """Serialize; equal records produce identical bytes (annotations sorted,
    attribute order fixed)."""
    root = ET.Element("modsti")
    doc = rec.document
    mods = ET.SubElement(root, "mods")
    ET.SubElement(mods, "identifier").text = doc.id
    ti = ET.SubElement(mods, "titleInfo")
    ET.SubElement(ti, "title").text = doc.title
    for lang, text in doc.abstracts:
        ab = ET.SubElement(mods, "abstract", {"lang": lang})
        ab.text = text
    ET.SubElement(mods, "sourceTag").text = doc.source.value
    for key, value in doc.extra:
        ext = ET.SubElement(mods, "extension", {"key": key})
        ext.text = value
    for flag in doc.flags:
        ET.SubElement(mods, "flag").text = flag

    sa = ET.SubElement(root, "spatialAnnotations")
    for i, e in enumerate(_sorted_spatial(rec.spatial)):
        attrs = {
            "id": f"s{i}",
            "kind": e.kind.value,
            "start": str(e.start),
            "end": str(e.end),
        }
        if e.relation is not None:
            attrs["relation"] = e.relation.value
        attrs["confidence"] = _fnum(e.confidence)
        es = ET.SubElement(sa, "es", attrs)
        ET.SubElement(es, "text").text = e.surface
        for ind in e.indicators:
            iel = ET.SubElement(es, "indicator", {"category": ind.category.value, "lang": ind.lang})
            iel.text = ind.surface
        for (a_start, a_end) in e.anchors:
            ET.SubElement(es, "anchor", {"start": str(a_start), "end": str(a_end)})
        for cid in e.candidates:
            ET.SubElement(es, "candidate", {"ref": str(cid)})
        if e.footprint is not None:
            ET.SubElement(
                es,
                "footprint",
                {
                    "ref": str(e.footprint.gazetteer_id),
                    "lat": _fnum(e.footprint.lat),
                    "lon": _fnum(e.footprint.lon),
                },
            )
    for o in sorted(rec.organizations, key=lambda o: (o.start, o.end)):
        org = ET.SubElement(
            sa, "org", {"start": str(o.start), "end": str(o.end), "trigger": o.trigger}
        )
        ET.SubElement(org, "text").text = o.surface

    ta = ET.SubElement(root, "temporalAnnotations")
    for t in sorted(rec.temporal, key=lambda t: (t.start, t.end)):
        te = ET.SubElement(
            ta,
            "te",
            {
                "category": t.category.value,
                "start": str(t.start),
                "end": str(t.end),
                "value": t.value_iso(),
            },
        )
        ET.SubElement(te, "text").text = t.surface

    tha = ET.SubElement(root, "thematicAnnotations")
    for th in sorted(rec.thematic, key=lambda t: (t.start, t.end, t.concept)):
        thel = ET.SubElement(
            tha,
            "the",
            {
                "concept": th.concept,
                "matchedVia": th.matched_via.value,
                "start": str(th.start),
                "end": str(th.end),
            },
        )
        ET.SubElement(thel, "text").text = th.surface
        for b in th.broader_chain:
            ET.SubElement(thel, "broader", {"ref": b})

    prov = ET.SubElement(root, "provenance", {"version": rec.provenance.version})
    for stage, seconds in rec.provenance.timings:
        ET.SubElement(prov, "timing", {"stage": stage, "seconds": _fnum(seconds)})

    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def _req(el: ET.Element, attr: str, path: str) -> str:
    v = el.get(attr)
    if v is None:
        raise SchemaViolation(f"missing attribute {attr!r}", path)
    return v


def _child_text(el: ET.Element, tag: str, path: str) -> str:
    c = el.find(tag)
    if c is None:
        raise SchemaViolation(f"missing <{tag}>", path)
    return c.text or ""


def parse_mods_ti_xml(data: bytes) -> ModsTiRecord:
    """Exact inverse of to_mods_ti_xml. Unknown elements inside <mods> are
    preserved as extra fields rather than rejected."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise SchemaViolation(f"not well-formed XML: {exc}", "/") from exc
    if root.tag != "modsti":
        raise SchemaViolation(f"root element {root.tag!r}, expected 'modsti'", "/")

    mods = root.find("mods")
    if mods is None:
        raise SchemaViolation("missing <mods>", "/modsti")
    doc_id = ""
    title = ""
    source = SourceTag.OTHER
    abstracts: list[tuple[str, str]] = []
    extra: list[tuple[str, str]] = []
    flags: list[str] = []
    for el in mods:
        if el.tag == "identifier":
            doc_id = el.text or ""
        elif el.tag == "titleInfo":
            title = _child_text(el, "title", "/modsti/mods/titleInfo")
        elif el.tag == "abstract":
            abstracts.append((_req(el, "lang", "/modsti/mods/abstract"), el.text or ""))
        elif el.tag == "sourceTag":
            source = SourceTag((el.text or "OTHER").strip())
        elif el.tag == "extension":
            extra.append((_req(el, "key", "/modsti/mods/extension"), el.text or ""))
        elif el.tag == "flag":
            flags.append((el.text or "").strip())
        else:
            extra.append((el.tag, "".join(el.itertext())))
    if not doc_id:
        raise SchemaViolation("empty identifier", "/modsti/mods/identifier")
    languages: list[str] = []
    for lang, _ in abstracts:
        if lang not in languages:
            languages.append(lang)
    document = Document(
        id=doc_id,
        source=source,
        languages=languages,
        title=title,
        abstracts=abstracts,
        extra=extra,
        flags=flags,
    )

    sa = root.find("spatialAnnotations")
    if sa is None:
        raise SchemaViolation("missing <spatialAnnotations>", "/modsti")
    spatial: list[SpatialEntity] = []
    organizations: list[OrganizationEntity] = []
    for el in sa:
        if el.tag == "es":
            p = "/modsti/spatialAnnotations/es"
            rel = el.get("relation")
            fp_el = el.find("footprint")
            footprint = None
            if fp_el is not None:
                footprint = Footprint(
                    gazetteer_id=int(_req(fp_el, "ref", p)),
                    lat=float(_req(fp_el, "lat", p)),
                    lon=float(_req(fp_el, "lon", p)),
                )
            spatial.append(
                SpatialEntity(
                    surface=_child_text(el, "text", p),
                    start=int(_req(el, "start", p)),
                    end=int(_req(el, "end", p)),
                    kind=SpatialKind(_req(el, "kind", p)),
                    indicators=tuple(
                        SpatialIndicator(
                            surface=i.text or "",
                            category=IndicatorCategory(_req(i, "category", p)),
                            lang=_req(i, "lang", p),
                        )
                        for i in el.findall("indicator")
                    ),
                    anchors=tuple(
                        (int(_req(a, "start", p)), int(_req(a, "end", p)))
                        for a in el.findall("anchor")
                    ),
                    relation=IndicatorCategory(rel) if rel else None,
                    candidates=tuple(int(_req(c, "ref", p)) for c in el.findall("candidate")),
                    footprint=footprint,
                    confidence=float(_req(el, "confidence", p)),
                )
            )
        elif el.tag == "org":
            p = "/modsti/spatialAnnotations/org"
            organizations.append(
                OrganizationEntity(
                    surface=_child_text(el, "text", p),
                    start=int(_req(el, "start", p)),
                    end=int(_req(el, "end", p)),
                    trigger=_req(el, "trigger", p),
                )
            )
        else:
            raise SchemaViolation(f"unexpected element <{el.tag}>", "/modsti/spatialAnnotations")

    ta = root.find("temporalAnnotations")
    if ta is None:
        raise SchemaViolation("missing <temporalAnnotations>", "/modsti")
    temporal: list[TemporalEntity] = []
    for el in ta.findall("te"):
        p = "/modsti/temporalAnnotations/te"
        category = TemporalCategory(_req(el, "category", p))
        v_start, v_end = parse_value(category, _req(el, "value", p))
        temporal.append(
            TemporalEntity(
                surface=_child_text(el, "text", p),
                start=int(_req(el, "start", p)),
                end=int(_req(el, "end", p)),
                category=category,
                value_start=v_start,
                value_end=v_end,
            )
        )

    tha = root.find("thematicAnnotations")
    if tha is None:
        raise SchemaViolation("missing <thematicAnnotations>", "/modsti")
    thematic: list[ThematicEntity] = []
    for el in tha.findall("the"):
        p = "/modsti/thematicAnnotations/the"
        thematic.append(
            ThematicEntity(
                surface=_child_text(el, "text", p),
                start=int(_req(el, "start", p)),
                end=int(_req(el, "end", p)),
                concept=_req(el, "concept", p),
                matched_via=MatchedVia(_req(el, "matchedVia", p)),
                broader_chain=tuple(_req(b, "ref", p) for b in el.findall("broader")),
            )
        )

    prov_el = root.find("provenance")
    if prov_el is None:
        raise SchemaViolation("missing <provenance>", "/modsti")
    provenance = Provenance(
        version=_req(prov_el, "version", "/modsti/provenance"),
        timings=[
            (_req(t, "stage", "/modsti/provenance/timing"),
             float(_req(t, "seconds", "/modsti/provenance/timing")))
            for t in prov_el.findall("timing")
        ],
    )

    return ModsTiRecord(
        document=document,
        spatial=spatial,
        organizations=organizations,
        temporal=temporal,
        thematic=thematic,
        provenance=provenance,
    )


def default_dtd_path() -> Path:
    return Path(str(importlib_resources.files("geodoc") / "resources" / "mods-ti.dtd"))


def validate_mods_ti(data: bytes, dtd_path: str | Path | None = None) -> None:
    dtdmod.validate_bytes(data, dtd_path or default_dtd_path())

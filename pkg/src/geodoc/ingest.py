"""Source metadata parsing: three input formats into one Document shape.

The pivot is a minimal bibliographic XML carrying identifier, title,
per-language abstracts and the verbatim key order of everything else, so a
Document can be dumped and re-read without loss of the mapped fields.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class SourceFormat(str, Enum):
    MODS_XML = "ModsXml"
    DUBLIN_CORE_XML = "DublinCoreXml"
    RDF_TRIPLES = "RdfTriples"


class SourceTag(str, Enum):
    ISTEX = "ISTEX"
    AGRITROP = "AGRITROP"
    ANRT = "ANRT"
    OTHER = "OTHER"


class IngestError(Exception):
    pass


class UnrecognizedFormat(IngestError):
    pass


class MalformedInput(IngestError):
    def __init__(self, message: str, position: str | None = None):
        super().__init__(message if position is None else f"{message} at {position}")
        self.position = position


@dataclass
class Document:
    id: str
    source: SourceTag = SourceTag.OTHER
    languages: list[str] = field(default_factory=list)
    title: str = ""
    abstracts: list[tuple[str, str]] = field(default_factory=list)  # (lang, text)
    extra: list[tuple[str, str]] = field(default_factory=list)  # source key order kept
    flags: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")


# ---------------------------------------------------------------- language

# Closed-class word lists; short abstracts make a lexicon method both
# deterministic and dependency-free.
_STOPWORDS = {
    "fr": frozenset(
        "le la les de des du un une et ou dans sur pour par avec est sont au aux "
        "ce cette ces il elle nous vous que qui ne pas plus entre d' l' à a été "
        "se sa son ses leur leurs comme mais donc ainsi cet elles ils dont".split()
    ),
    "en": frozenset(
        "the a an of and or in on at for to from with by is are was were this "
        "these those it they we that which not as its their our between during "
        "has have had be been but also can may such than".split()
    ),
}

_WORD_RE = re.compile(r"[^\W\d_]+['’]?", re.UNICODE)


def detect_language(text: str, default: str = "en") -> str:
    """Score closed-class word frequency over {fr, en}; fall back to default."""
    if not text:
        raise ValueError("text must be non-empty")
    words = [w.lower() for w in _WORD_RE.findall(text)]
    scores = {
        lang: sum(1 for w in words if w in stop) for lang, stop in _STOPWORDS.items()
    }
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    if ranked[0][1] == 0 or (len(ranked) > 1 and ranked[0][1] == ranked[1][1]):
        return default
    return ranked[0][0]


# ------------------------------------------------------------ format sniff

_TRIPLE_RE = re.compile(r"^\s*<[^>]+>\s+<[^>]+>\s+.+\s*\.\s*$")


def detect_format(data: bytes) -> SourceFormat:
    """Structural signature dispatch: XML root name or N-Triples lines."""
    if not data:
        raise UnrecognizedFormat("empty input")
    text = data.decode("utf-8", errors="replace").strip()
    first = next((ln for ln in text.splitlines() if ln.strip()), "")
    if _TRIPLE_RE.match(first):
        return SourceFormat.RDF_TRIPLES
    if text.startswith("<"):
        try:
            root = ET.fromstring(text)
        except ET.ParseError as exc:
            raise UnrecognizedFormat(f"XML-like input failed to parse: {exc}") from exc
        local = root.tag.rsplit("}", 1)[-1]
        if local in ("mods", "modsCollection"):
            return SourceFormat.MODS_XML
        if local in ("RDF",):
            return SourceFormat.RDF_TRIPLES
        if local in ("record", "records", "dc", "qualifieddc", "metadata", "dublin_core"):
            return SourceFormat.DUBLIN_CORE_XML
        # fall back on namespace evidence
        blob = text[:4000]
        if "purl.org/dc/" in blob or "dc:" in blob:
            return SourceFormat.DUBLIN_CORE_XML
        raise UnrecognizedFormat(f"unknown XML root element {local!r}")
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if lines and all(_TRIPLE_RE.match(ln) or ln.strip().endswith(".") for ln in lines[:20]):
        if any(_TRIPLE_RE.match(ln) for ln in lines[:20]):
            return SourceFormat.RDF_TRIPLES
    raise UnrecognizedFormat("no structural signature matched")


# ----------------------------------------------------------------- parsers

def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _detect_or(text: str, lang_attr: str | None, default: str) -> str:
    if lang_attr:
        code = lang_attr.lower()
        return {"fre": "fr", "eng": "en", "french": "fr", "english": "en"}.get(code, code[:2])
    return detect_language(text, default) if text else default


def parse_document(
    data: bytes,
    fmt: SourceFormat,
    doc_id: str | None = None,
    source: SourceTag = SourceTag.OTHER,
    default_lang: str = "en",
) -> Document:
    if fmt == SourceFormat.MODS_XML:
        return _parse_mods(data, doc_id, source, default_lang)
    if fmt == SourceFormat.DUBLIN_CORE_XML:
        return _parse_dc(data, doc_id, source, default_lang)
    if fmt == SourceFormat.RDF_TRIPLES:
        return _parse_rdf(data, doc_id, source, default_lang)
    raise UnrecognizedFormat(str(fmt))


def _xml_root(data: bytes) -> ET.Element:
    try:
        return ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedInput("XML syntax error", position=str(exc.position)) from exc


def _finish(doc: Document) -> Document:
    if not doc.abstracts:
        doc.flags.append("missing-abstract")
    doc.languages = []
    for lang, _ in doc.abstracts:
        if lang not in doc.languages:
            doc.languages.append(lang)
    return doc


def _parse_mods(data, doc_id, source, default_lang) -> Document:
    root = _xml_root(data)
    if _local(root.tag) == "modsCollection":
        mods = next((c for c in root if _local(c.tag) == "mods"), None)
        if mods is None:
            raise MalformedInput("modsCollection without mods child")
        root = mods
    title = ""
    abstracts: list[tuple[str, str]] = []
    extra: list[tuple[str, str]] = []
    ident = None
    for el in root:
        tag = _local(el.tag)
        if tag == "titleInfo":
            t = next((c for c in el if _local(c.tag) == "title"), None)
            if t is not None and t.text:
                title = t.text.strip()
        elif tag == "abstract":
            text = (el.text or "").strip()
            if text:
                abstracts.append((_detect_or(text, el.get("lang"), default_lang), text))
        elif tag == "identifier" and ident is None:
            ident = (el.text or "").strip() or None
        else:
            extra.append((tag, _flatten_text(el)))
    doc = Document(
        id=doc_id or ident or _fallback_id(data),
        source=source,
        title=title,
        abstracts=abstracts,
        extra=extra,
    )
    return _finish(doc)


def _parse_dc(data, doc_id, source, default_lang) -> Document:
    root = _xml_root(data)
    title = ""
    abstracts: list[tuple[str, str]] = []
    extra: list[tuple[str, str]] = []
    ident = None
    for el in root.iter():
        tag = _local(el.tag)
        if el is root:
            continue
        if tag == "title" and not title:
            title = (el.text or "").strip()
        elif tag in ("description", "abstract"):
            text = (el.text or "").strip()
            if text:
                abstracts.append((_detect_or(text, el.get(f"{{{'http://www.w3.org/XML/1998/namespace'}}}lang") or el.get("lang"), default_lang), text))
        elif tag == "identifier" and ident is None:
            ident = (el.text or "").strip() or None
        elif el.text and el.text.strip():
            extra.append((tag, el.text.strip()))
    doc = Document(
        id=doc_id or ident or _fallback_id(data),
        source=source,
        title=title,
        abstracts=abstracts,
        extra=extra,
    )
    return _finish(doc)


_NT_LINE = re.compile(
    r'^\s*<(?P<s>[^>]+)>\s+<(?P<p>[^>]+)>\s+(?P<o>.+?)\s*\.\s*$'
)
_NT_LITERAL = re.compile(r'^"(?P<text>(?:[^"\\]|\\.)*)"(?:@(?P<lang>[A-Za-z-]+))?')


def _parse_rdf(data, doc_id, source, default_lang) -> Document:
    text = data.decode("utf-8")
    title = ""
    abstracts: list[tuple[str, str]] = []
    extra: list[tuple[str, str]] = []
    ident = doc_id
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _NT_LINE.match(line)
        if m is None:
            raise MalformedInput("not an N-Triples line", position=f"line {n}")
        subj, pred, obj = m.group("s"), m.group("p"), m.group("o")
        if ident is None:
            ident = subj
        pred_local = re.split(r"[/#]", pred)[-1]
        lit = _NT_LITERAL.match(obj)
        value = lit.group("text").encode().decode("unicode_escape") if lit else obj.strip("<>")
        lang_tag = lit.group("lang") if lit else None
        if pred_local == "title" and not title:
            title = value
        elif pred_local in ("abstract", "description"):
            abstracts.append((_detect_or(value, lang_tag, default_lang), value))
        else:
            extra.append((pred_local, value))
    if ident is None:
        raise MalformedInput("no triples found")
    doc = Document(
        id=ident, source=source, title=title, abstracts=abstracts, extra=extra
    )
    return _finish(doc)


def _flatten_text(el: ET.Element) -> str:
    return " ".join("".join(el.itertext()).split())


def _fallback_id(data: bytes) -> str:
    import hashlib

    return "doc-" + hashlib.sha1(data).hexdigest()[:12]


# ------------------------------------------------------------- pivot dump

PIVOT_NS = None  # plain elements; the pivot is artifact-defined


def to_pivot_xml(doc: Document) -> bytes:
    """Debug dump of a Document; parse_pivot_xml() inverts it field-wise."""
    root = ET.Element("mods")
    ET.SubElement(root, "identifier").text = doc.id
    ti = ET.SubElement(root, "titleInfo")
    ET.SubElement(ti, "title").text = doc.title
    for lang, text in doc.abstracts:
        ab = ET.SubElement(root, "abstract", {"lang": lang})
        ab.text = text
    ET.SubElement(root, "sourceTag").text = doc.source.value
    for key, value in doc.extra:
        f = ET.SubElement(root, "extension", {"key": key})
        f.text = value
    for flag in doc.flags:
        ET.SubElement(root, "flag").text = flag
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def parse_pivot_xml(data: bytes) -> Document:
    root = _xml_root(data)
    doc_id = ""
    title = ""
    source = SourceTag.OTHER
    abstracts: list[tuple[str, str]] = []
    extra: list[tuple[str, str]] = []
    flags: list[str] = []
    for el in root:
        tag = _local(el.tag)
        if tag == "identifier":
            doc_id = (el.text or "").strip()
        elif tag == "titleInfo":
            t = next((c for c in el if _local(c.tag) == "title"), None)
            title = (t.text or "") if t is not None and t.text else ""
        elif tag == "abstract":
            abstracts.append((el.get("lang", "en"), el.text or ""))
        elif tag == "sourceTag":
            source = SourceTag((el.text or "OTHER").strip())
        elif tag == "extension":
            extra.append((el.get("key", ""), el.text or ""))
        elif tag == "flag":
            flags.append((el.text or "").strip())
    doc = Document(
        id=doc_id, source=source, title=title, abstracts=abstracts, extra=extra
    )
    doc.flags = [f for f in flags if f != "missing-abstract"]
    return _finish(doc)


# --------------------------------------------------------------- manifest

@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    source: SourceTag


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    """One document path per line, optional tab-separated source tag."""
    base = Path(path).parent
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        p = Path(parts[0])
        if not p.is_absolute():
            p = base / p
        tag = SourceTag(parts[1]) if len(parts) > 1 else SourceTag.OTHER
        out.append(ManifestEntry(path=p, source=tag))
    return out


def ingest_file(
    path: str | Path, source: SourceTag = SourceTag.OTHER, default_lang: str = "en"
) -> Document:
    data = Path(path).read_bytes()
    fmt = detect_format(data)
    return parse_document(data, fmt, source=source, default_lang=default_lang)

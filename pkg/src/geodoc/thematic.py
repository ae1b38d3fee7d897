"""SKOS thesaurus loading and longest-match concept annotation.

Consumes exactly four SKOS properties: Concept, prefLabel, altLabel
("used for" terms) and broader (generic terms). Anything richer in the
file is ignored without error, so any SKOS-formalized domain resource
plugs in unchanged.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum

from .gazetteer import fold
from .tokenizer import tokenize

SKOS_NS = "http://www.w3.org/2004/02/skos/core#"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XML_NS = "http://www.w3.org/XML/1998/namespace"


class SkosError(Exception):
    pass


class MalformedSkos(SkosError):
    pass


class DanglingBroaderRef(SkosError):
    def __init__(self, offenders: list[tuple[str, str]]):
        ids = ", ".join(f"{cid} -> {ref}" for cid, ref in offenders)
        super().__init__(f"broader references do not resolve: {ids}")
        self.offenders = offenders


class MatchedVia(str, Enum):
    PREF_LABEL = "PrefLabel"
    ALT_LABEL = "AltLabel"


@dataclass(frozen=True)
class SkosConcept:
    id: str
    pref_label: dict[str, str]
    alt_labels: dict[str, tuple[str, ...]]
    broader: tuple[str, ...]


@dataclass(frozen=True)
class ThematicEntity:
    surface: str
    start: int
    end: int
    concept: str
    matched_via: MatchedVia
    broader_chain: tuple[str, ...] = ()


@dataclass
class ConceptStore:
    concepts: dict[str, SkosConcept] = field(default_factory=dict)
    # (lang, folded label) -> [(concept id, via)]
    _labels: dict[tuple[str, str], list[tuple[str, MatchedVia]]] = field(default_factory=dict)
    max_label_words: int = 1

    def add(self, concept: SkosConcept) -> None:
        self.concepts[concept.id] = concept

    def build_label_index(self) -> None:
        self._labels.clear()
        self.max_label_words = 1
        for cid in sorted(self.concepts):
            c = self.concepts[cid]
            for lang, label in sorted(c.pref_label.items()):
                self._index_label(lang, label, cid, MatchedVia.PREF_LABEL)
            for lang, labels in sorted(c.alt_labels.items()):
                for label in labels:
                    self._index_label(lang, label, cid, MatchedVia.ALT_LABEL)

    def _index_label(self, lang: str, label: str, cid: str, via: MatchedVia) -> None:
        key = (lang, fold(label))
        entry = (cid, via)
        bucket = self._labels.setdefault(key, [])
        if entry not in bucket:
            bucket.append(entry)
        self.max_label_words = max(self.max_label_words, len(label.split()))

    def lookup_label(self, lang: str, phrase: str) -> list[tuple[str, MatchedVia]]:
        return self._labels.get((lang, fold(phrase)), [])

    def broader_chain(self, cid: str, depth: int = 2) -> tuple[str, ...]:
        """Nearest-first generic concepts, cycle-safe, bounded depth."""
        chain: list[str] = []
        visited = {cid}
        frontier = [cid]
        for _ in range(depth):
            nxt: list[str] = []
            for c in frontier:
                for b in self.concepts[c].broader:
                    if b in visited or b not in self.concepts:
                        continue
                    visited.add(b)
                    chain.append(b)
                    nxt.append(b)
            if not nxt:
                break
            frontier = nxt
        return tuple(chain)


def _lang_of(el: ET.Element) -> str:
    return el.get(f"{{{XML_NS}}}lang", "en")


def load_skos(source: bytes | str) -> ConceptStore:
    """Parse SKOS XML into a concept store with a folded label index."""
    try:
        root = ET.fromstring(source)
    except ET.ParseError as exc:
        raise MalformedSkos(str(exc)) from exc
    store = ConceptStore()
    for cel in root.iter(f"{{{SKOS_NS}}}Concept"):
        cid = cel.get(f"{{{RDF_NS}}}about") or cel.get(f"{{{RDF_NS}}}ID")
        if not cid:
            raise MalformedSkos("skos:Concept without rdf:about identifier")
        pref: dict[str, str] = {}
        alt: dict[str, list[str]] = {}
        broader: list[str] = []
        for child in cel:
            tag = child.tag
            if tag == f"{{{SKOS_NS}}}prefLabel" and child.text:
                pref[_lang_of(child)] = child.text.strip()
            elif tag == f"{{{SKOS_NS}}}altLabel" and child.text:
                alt.setdefault(_lang_of(child), []).append(child.text.strip())
            elif tag == f"{{{SKOS_NS}}}broader":
                ref = child.get(f"{{{RDF_NS}}}resource")
                if ref:
                    broader.append(ref)
        store.add(
            SkosConcept(
                id=cid,
                pref_label=pref,
                alt_labels={k: tuple(v) for k, v in alt.items()},
                broader=tuple(broader),
            )
        )
    dangling = [
        (cid, ref)
        for cid, c in store.concepts.items()
        for ref in c.broader
        if ref not in store.concepts
    ]
    if dangling:
        raise DanglingBroaderRef(sorted(dangling))
    store.build_label_index()
    return store


def merge_stores(stores: list[ConceptStore]) -> ConceptStore:
    """Combine stores loaded from several files; annotation output must not
    depend on how content was split across files."""
    merged = ConceptStore()
    for s in stores:
        for c in s.concepts.values():
            merged.add(c)
    merged.build_label_index()
    return merged


MAX_NGRAM = 6


def annotate_thematic(
    text: str, lang: str, store: ConceptStore, broader_depth: int = 2
) -> list[ThematicEntity]:
    """Longest-match n-gram lookup (n <= 6) over word tokens.

    Overlapping shorter matches are suppressed; each hit carries its
    broader chain for index-time expansion.
    """
    tokens = [t for t in tokenize(text, lang)]
    words = [t for t in tokens if t.kind.value in ("Word", "Hyphenated", "Number")]
    max_n = min(MAX_NGRAM, store.max_label_words)
    hits: list[ThematicEntity] = []
    taken: list[tuple[int, int]] = []
    i = 0
    while i < len(words):
        found = None
        for n in range(min(max_n, len(words) - i), 0, -1):
            span_tokens = words[i : i + n]
            phrase = text[span_tokens[0].start : span_tokens[-1].end]
            matches = store.lookup_label(lang, phrase)
            if matches:
                cid, via = matches[0]
                found = (n, span_tokens[0].start, span_tokens[-1].end, cid, via)
                break
        if found:
            n, s, e, cid, via = found
            hits.append(
                ThematicEntity(
                    surface=text[s:e],
                    start=s,
                    end=e,
                    concept=cid,
                    matched_via=via,
                    broader_chain=store.broader_chain(cid, broader_depth),
                )
            )
            i += n
        else:
            i += 1
    return hits

"""Spatial entity recognition and resolution.

Absolute entities (direct references to locatable places) and relative
entities (an absolute anchor plus a topological indicator) are matched with
token-sequence rules; organizations are peeled off first so a name followed
by an action verb never surfaces as a place. Resolution filters gazetteer
candidates by feature type, then scores context-country agreement against an
importance prior.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .gazetteer import Gazetteer, FeatureClass, feature_class_for, fold
from .rules import Rule, RuleSet, match_rule_at, MatchPiece
from .tokenizer import Token, tokenize, sentence_index


class IndicatorCategory(str, Enum):
    FEATURE_TYPE = "FeatureType"
    ORIENTATION = "Orientation"
    DISTANCE = "Distance"
    ADJACENCY = "Adjacency"
    INCLUSION = "Inclusion"
    GEOMETRIC_FIGURE = "GeometricFigure"


class SpatialKind(str, Enum):
    ABSOLUTE = "Absolute"
    RELATIVE = "Relative"


@dataclass(frozen=True)
class SpatialIndicator:
    surface: str
    category: IndicatorCategory
    lang: str


@dataclass(frozen=True)
class Footprint:
    gazetteer_id: int
    lat: float
    lon: float


@dataclass(frozen=True)
class SpatialEntity:
    surface: str
    start: int
    end: int
    kind: SpatialKind
    indicators: tuple[SpatialIndicator, ...] = ()
    anchors: tuple[tuple[int, int], ...] = ()  # (start, end) spans of anchor ESAs
    relation: IndicatorCategory | None = None
    candidates: tuple[int, ...] = ()
    footprint: Footprint | None = None
    confidence: float = 0.0


@dataclass(frozen=True)
class OrganizationEntity:
    surface: str
    start: int
    end: int
    trigger: str


@dataclass(frozen=True)
class _RawMatch:
    rule: Rule
    tok_start: int
    tok_end: int  # exclusive token index
    pieces: tuple[MatchPiece, ...]


def _select_non_overlapping(matches: list[_RawMatch], tokens: list[Token]) -> list[_RawMatch]:
    """Longest match wins, then leftmost, then lowest rule order."""
    ordered = sorted(
        matches,
        key=lambda m: (-(tokens[m.tok_end - 1].end - tokens[m.tok_start].start),
                       tokens[m.tok_start].start,
                       m.rule.order),
    )
    chosen: list[_RawMatch] = []
    taken: set[int] = set()
    for m in ordered:
        span = range(m.tok_start, m.tok_end)
        if any(t in taken for t in span):
            continue
        taken.update(span)
        chosen.append(m)
    return sorted(chosen, key=lambda m: m.tok_start)


def _run_rules(
    rules: list[Rule],
    tokens: list[Token],
    rs: RuleSet,
    esa_spans: list[tuple[int, int]] | None = None,
    blocked: set[int] | None = None,
) -> list[_RawMatch]:
    blocked = blocked or set()
    matches = []
    for rule in rules:
        for start in range(len(tokens)):
            pieces = match_rule_at(rule, tokens, start, rs, esa_spans)
            if pieces is None:
                continue
            tok_idxs = _piece_token_range(pieces, esa_spans or [])
            if tok_idxs is None:
                continue
            lo, hi = tok_idxs
            if any(t in blocked for t in range(lo, hi)):
                continue
            matches.append(_RawMatch(rule, lo, hi, tuple(pieces)))
    return matches


def _piece_token_range(
    pieces: list[MatchPiece], esa_spans: list[tuple[int, int]]
) -> tuple[int, int] | None:
    idxs: list[int] = []
    for p in pieces:
        if p.token_index is not None:
            idxs.append(p.token_index)
        elif p.esa_index is not None:
            s, e = esa_spans[p.esa_index]
            idxs.extend((s, e - 1))
    if not idxs:
        return None
    return min(idxs), max(idxs) + 1


def _indicator_pieces(
    m: _RawMatch, tokens: list[Token], rs: RuleSet, lang: str
) -> tuple[SpatialIndicator, ...]:
    out = []
    for p in m.pieces:
        if p.token_index is None:
            continue
        atom = m.rule.atoms[p.atom_index]
        for op, arg in atom.alternatives:
            if op == "lex" and arg.startswith("feature_types"):
                if fold(tokens[p.token_index].text) in rs.lexicons.get(arg, frozenset()):
                    out.append(
                        SpatialIndicator(
                            surface=tokens[p.token_index].text,
                            category=IndicatorCategory.FEATURE_TYPE,
                            lang=lang,
                        )
                    )
                break
    return tuple(out)


def match_organizations(
    tokens: list[Token], rules: RuleSet, text: str = ""
) -> list[OrganizationEntity]:
    """Capitalized run immediately followed by an action verb, same sentence."""
    raw = _run_rules(rules.rules_for("ORG"), tokens, rules)
    sent = sentence_index(tokens, text, rules.lang) if text else [0] * len(tokens)
    out = []
    for m in _select_non_overlapping(raw, tokens):
        # the entity span excludes the trailing verb token(s)
        name_idxs = [
            p.token_index
            for p in m.pieces
            if p.token_index is not None
            and any(op == "cap" for op, _ in m.rule.atoms[p.atom_index].alternatives)
        ]
        if not name_idxs:
            continue
        lo, hi = min(name_idxs), max(name_idxs)
        if sent and sent[lo] != sent[m.tok_end - 1]:
            continue
        # a name ending in a geographic feature word is a place, not an org
        feature_lex = rules.lexicons.get(f"feature_types_{rules.lang}", frozenset())
        if fold(tokens[hi].text) in feature_lex:
            continue
        out.append(
            OrganizationEntity(
                surface=_surface(tokens, lo, hi + 1, text),
                start=tokens[lo].start,
                end=tokens[hi].end,
                trigger=m.rule.rule_id,
            )
        )
    return out


def match_esa(
    tokens: list[Token],
    rules: RuleSet,
    text: str = "",
    blocked_tokens: set[int] | None = None,
) -> list[SpatialEntity]:
    """Absolute spatial entities; organization token spans are excluded."""
    raw = _run_rules(rules.rules_for("ESA"), tokens, rules, blocked=blocked_tokens)
    out = []
    for m in _select_non_overlapping(raw, tokens):
        out.append(
            SpatialEntity(
                surface=_surface(tokens, m.tok_start, m.tok_end, text),
                start=tokens[m.tok_start].start,
                end=tokens[m.tok_end - 1].end,
                kind=SpatialKind.ABSOLUTE,
                indicators=_indicator_pieces(m, tokens, rules, rules.lang),
            )
        )
    return out


def match_esr(
    tokens: list[Token],
    esas: list[SpatialEntity],
    rules: RuleSet,
    text: str = "",
) -> list[SpatialEntity]:
    """Relative entities wrapping at least one absolute anchor."""
    tok_span_by_esa: list[tuple[int, int]] = []
    for e in esas:
        first = next(i for i, t in enumerate(tokens) if t.start == e.start)
        last = next(i for i, t in enumerate(tokens) if t.end == e.end)
        tok_span_by_esa.append((first, last + 1))
    raw = _run_rules(rules.rules_for("ESR:"), tokens, rules, esa_spans=tok_span_by_esa)
    out = []
    for m in _select_non_overlapping(raw, tokens):
        relation = IndicatorCategory(m.rule.label.split(":", 1)[1])
        anchor_spans = tuple(
            (esas[p.esa_index].start, esas[p.esa_index].end)
            for p in m.pieces
            if p.esa_index is not None
        )
        if not anchor_spans:
            continue
        ind_tokens = [
            tokens[p.token_index]
            for p in m.pieces
            if p.token_index is not None
            and any(op in ("lex", "lit") for op, _ in m.rule.atoms[p.atom_index].alternatives)
        ]
        indicators = tuple(
            SpatialIndicator(surface=t.text, category=relation, lang=rules.lang)
            for t in ind_tokens
        )
        out.append(
            SpatialEntity(
                surface=_surface(tokens, m.tok_start, m.tok_end, text),
                start=tokens[m.tok_start].start,
                end=tokens[m.tok_end - 1].end,
                kind=SpatialKind.RELATIVE,
                indicators=indicators,
                anchors=anchor_spans,
                relation=relation,
            )
        )
    return out


def _surface(tokens: list[Token], lo: int, hi: int, text: str) -> str:
    if text:
        return text[tokens[lo].start : tokens[hi - 1].end]
    return " ".join(t.text for t in tokens[lo:hi])


def gather_candidates(entity: SpatialEntity, gaz: Gazetteer) -> tuple[int, ...]:
    """Candidate gazetteer ids for an absolute entity.

    Tries the full surface first, then the surface with the feature-type
    word stripped, then the bare capitalized head run.
    """
    seen: dict[int, None] = {}
    queries = [entity.surface]
    feature_surfaces = {
        fold(i.surface) for i in entity.indicators if i.category == IndicatorCategory.FEATURE_TYPE
    }
    if feature_surfaces:
        words = entity.surface.split()
        kept = [w for w in words if fold(w) not in feature_surfaces]
        # also drop linking prepositions left dangling ("golfe de Guinée" -> "Guinée")
        kept = [w for w in kept if fold(w) not in ("de", "du", "des", "la", "le", "l'", "of", "the")]
        if kept and len(kept) < len(words):
            queries.append(" ".join(kept))
    for q in queries:
        for e in gaz.lookup(q):
            seen.setdefault(e.id, None)
    return tuple(seen)


def disambiguate(
    entity: SpatialEntity,
    context_countries: list[str],
    gaz: Gazetteer,
    context_weight: float = 0.7,
    importance_weight: float = 0.3,
) -> SpatialEntity:
    """Resolve the footprint among gazetteer candidates.

    Feature-type indicators first narrow candidates to the matching
    gazetteer class; survivors are scored by country co-occurrence with the
    rest of the document plus an importance prior, and the argmax wins.
    """
    cands = [gaz.entries[i] for i in entity.candidates if i in gaz.entries]
    wanted_classes = {
        fc
        for ind in entity.indicators
        if ind.category == IndicatorCategory.FEATURE_TYPE
        and (fc := feature_class_for(ind.surface)) is not None
    }
    if wanted_classes:
        narrowed = [c for c in cands if c.feature_class in wanted_classes]
        if narrowed:
            cands = narrowed
    if not cands:
        return replace(entity, footprint=None, confidence=0.0)
    max_importance = max(c.importance for c in cands) or 1
    counts = {cc: context_countries.count(cc) for cc in set(context_countries)}
    total_ctx = sum(counts.values())
    scores = []
    for c in cands:
        ctx = counts.get(c.country, 0) / total_ctx if total_ctx else 0.0
        imp = c.importance / max_importance
        scores.append(context_weight * ctx + importance_weight * imp)
    best_i = max(range(len(cands)), key=lambda i: (scores[i], cands[i].importance, -cands[i].id))
    total = sum(scores)
    confidence = scores[best_i] / total if total > 0 else 1.0 / len(cands)
    winner = cands[best_i]
    return replace(
        entity,
        candidates=tuple(c.id for c in cands),
        footprint=Footprint(winner.id, winner.lat, winner.lon),
        confidence=confidence,
    )


def annotate_spatial_text(
    text: str,
    lang: str,
    rules: RuleSet,
    gaz: Gazetteer,
    context_weight: float = 0.7,
    importance_weight: float = 0.3,
) -> tuple[list[SpatialEntity], list[OrganizationEntity]]:
    """Full spatial pass over one text segment.

    tokenize -> organizations -> absolute -> relative -> two-pass resolution
    (unambiguous entities vote on the country context for the rest).
    """
    tokens = tokenize(text, lang)
    orgs = match_organizations(tokens, rules, text)
    org_token_idxs = {
        i for o in orgs for i, t in enumerate(tokens) if t.start >= o.start and t.end <= o.end
    }
    esas = match_esa(tokens, rules, text, blocked_tokens=org_token_idxs)
    esas = [replace(e, candidates=gather_candidates(e, gaz)) for e in esas]

    # pass 1: entities with a single candidate fix the document's country context
    context: list[str] = []
    for e in esas:
        cands = [gaz.entries[i] for i in e.candidates if i in gaz.entries]
        if len(cands) == 1:
            context.append(cands[0].country)
    resolved = [
        disambiguate(e, context, gaz, context_weight, importance_weight) for e in esas
    ]
    esrs = match_esr(tokens, resolved, rules, text)
    # an ESR inherits its (first) anchor's footprint; geometric expansion is
    # out of scope, the relation tag is the payload
    by_span = {(e.start, e.end): e for e in resolved}
    esrs = [
        replace(
            r,
            footprint=by_span[r.anchors[0]].footprint if r.anchors[0] in by_span else None,
            candidates=by_span[r.anchors[0]].candidates if r.anchors[0] in by_span else (),
            confidence=by_span[r.anchors[0]].confidence if r.anchors[0] in by_span else 0.0,
        )
        for r in esrs
    ]
    entities = sorted(resolved + esrs, key=lambda e: (e.start, e.end, e.kind.value))
    return entities, sorted(orgs, key=lambda o: (o.start, o.end))

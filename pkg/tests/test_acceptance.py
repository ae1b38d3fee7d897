"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line so the run log doubles as a checklist.

Tolerances are stated inline next to each assertion.
"""

from __future__ import annotations

import json
import random
import time
from contextlib import contextmanager
from importlib import resources as importlib_resources

import pytest

from geodoc.evaluation import (
    Category,
    CategoryScore,
    GoldDocument,
    GoldSpan,
    MatchMode,
    load_gold_dir,
    score,
)
from geodoc.gazetteer import FeatureClass
from geodoc.goldpipe import annotate_gold_corpus
from geodoc.indexer import IndexEntry, Query, SpatialPosting, TemporalPosting, ThematicPosting, build_index, load_index, query_index
from geodoc.ingest import Document, SourceTag, read_manifest
from geodoc.modsti import (
    PIPELINE_VERSION,
    ModsTiRecord,
    Provenance,
    parse_mods_ti_xml,
    to_mods_ti_xml,
    validate_mods_ti,
)
from geodoc.pipeline import run_pipeline
from geodoc.spatial import (
    Footprint,
    IndicatorCategory,
    OrganizationEntity,
    SpatialEntity,
    SpatialIndicator,
    SpatialKind,
    annotate_spatial_text,
)
from geodoc.temporal import CalendarDate, TemporalCategory, TemporalEntity
from geodoc.thematic import MatchedVia, ThematicEntity


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


# ------------------------------------------------------------ criterion 1

def test_criterion_1_f_measure_arithmetic():
    with criterion("1 f-measure arithmetic"):
        # P=0.62 / R=0.91 via integer counts; tolerance ±0.005
        s = CategoryScore(tp=2821, fp=1729, fn=279)
        assert s.f1 == pytest.approx(0.74, abs=0.005)
        # P=1.00 / R=0.90; tolerance ±0.001
        assert CategoryScore(tp=9, fp=0, fn=1).f1 == pytest.approx(0.947, abs=0.001)
        # P=0.90 / R=0.60; tolerance ±0.005
        assert CategoryScore(tp=9, fp=1, fn=6).f1 == pytest.approx(0.72, abs=0.005)


# ------------------------------------------------------------ criterion 2

GOLDEN_PHRASES = [
    # (lang, sentence, expected surface, kind, relation)
    ("fr", "Les pluies viennent du golfe de Guinée.", "golfe de Guinée", SpatialKind.ABSOLUTE, None),
    ("fr", "Le bassin du lac Eyre est fermé.", "lac Eyre", SpatialKind.ABSOLUTE, None),
    ("fr", "Les reliefs du sud-ouest de l'Arabie Saoudite.", "sud-ouest de l'Arabie Saoudite",
     SpatialKind.RELATIVE, "Orientation"),
    ("fr", "Des feux dans la région du Mackenzie.", "dans la région du Mackenzie",
     SpatialKind.RELATIVE, "Inclusion"),
    ("en", "Floods along the Willamette River.", "Willamette River", SpatialKind.ABSOLUTE, None),
    ("en", "Cyclones over the Indian Ocean.", "Indian Ocean", SpatialKind.ABSOLUTE, None),
    ("en", "Erosion in the Wujiang River Basin.", "Wujiang River Basin", SpatialKind.ABSOLUTE, None),
    ("en", "Sites are located near Paris.", "near Paris", SpatialKind.RELATIVE, "Adjacency"),
]


def test_criterion_2_pattern_golden_suite(resources):
    with criterion("2 pattern golden suite (8/8)"):
        t0 = time.perf_counter()
        hits = 0
        for lang, sentence, surface, kind, relation in GOLDEN_PHRASES:
            ents, _ = annotate_spatial_text(
                sentence, lang, resources.rulesets[lang], resources.gazetteer
            )
            match = [e for e in ents if e.surface == surface]
            assert match, f"{surface!r} not found in {sentence!r}: {[e.surface for e in ents]}"
            e = match[0]
            assert e.kind is kind, f"{surface!r}: kind {e.kind} != {kind}"
            got_rel = e.relation.value if e.relation else None
            assert got_rel == relation, f"{surface!r}: relation {got_rel} != {relation}"
            hits += 1
        assert hits == 8
        assert time.perf_counter() - t0 < 1.0  # stated budget: < 1 s


# ------------------------------------------------------------ criterion 3

def test_criterion_3_disambiguation_fixtures(resources):
    with criterion("3 disambiguation fixtures (2/2)"):
        gaz = resources.gazetteer
        assert len(gaz.entries) == 50  # shipped fixture size

        ents, _ = annotate_spatial_text(
            "Rainfall feeds the Senegal River each year.", "en", resources.rulesets["en"], gaz
        )
        river = next(e for e in ents if e.surface == "Senegal River")
        entry = gaz.entries[river.footprint.gazetteer_id]
        assert entry.feature_class is FeatureClass.STREAM
        assert entry.id == 1002

        ents, _ = annotate_spatial_text(
            "Une station est installée à Bayonne. Le projet est conduit en France.",
            "fr", resources.rulesets["fr"], gaz,
        )
        bayonne = next(e for e in ents if e.surface == "Bayonne")
        assert gaz.entries[bayonne.footprint.gazetteer_id].country == "FR"


# ------------------------------------------------------------ criterion 4

def _random_record(rng: random.Random) -> ModsTiRecord:
    words = ["delta", "Fleuve", "zone", "étude", "basin", "survey", "région"]

    def text():
        return " ".join(rng.choices(words, k=rng.randint(1, 3)))

    def span():
        a = rng.randrange(0, 400)
        return a, a + rng.randint(1, 40)

    spatial = []
    for _ in range(rng.randint(0, 4)):
        start, end = span()
        relative = rng.random() < 0.4
        spatial.append(
            SpatialEntity(
                surface=text(), start=start, end=end,
                kind=SpatialKind.RELATIVE if relative else SpatialKind.ABSOLUTE,
                indicators=tuple(
                    SpatialIndicator(text(), rng.choice(list(IndicatorCategory)), "fr")
                    for _ in range(rng.randint(0, 2))
                ),
                anchors=tuple(span() for _ in range(rng.randint(1, 2))) if relative else (),
                relation=rng.choice(
                    [IndicatorCategory.ORIENTATION, IndicatorCategory.DISTANCE,
                     IndicatorCategory.ADJACENCY, IndicatorCategory.INCLUSION,
                     IndicatorCategory.GEOMETRIC_FIGURE]
                ) if relative else None,
                candidates=tuple(sorted(rng.sample(range(1, 2000), rng.randint(0, 3)))),
                footprint=Footprint(
                    rng.randrange(1, 2000),
                    rng.uniform(-90, 90), rng.uniform(-180, 180),
                ) if rng.random() < 0.7 else None,
                confidence=rng.random(),
            )
        )
    spatial.sort(key=lambda e: (e.start, e.end, e.kind.value))

    temporal = []
    for _ in range(rng.randint(0, 3)):
        start, end = span()
        period = rng.random() < 0.5
        y = rng.randint(1000, 2100)
        month = rng.randint(0, 12)
        temporal.append(
            TemporalEntity(
                text(), start, end,
                TemporalCategory.PERIOD if period else TemporalCategory.DATE,
                CalendarDate(y, month, rng.randint(1, 28) if month else 0),
                CalendarDate(rng.randint(y, 2100)) if period else None,
            )
        )
    temporal.sort(key=lambda t: (t.start, t.end))

    thematic = []
    for _ in range(rng.randint(0, 3)):
        start, end = span()
        thematic.append(
            ThematicEntity(
                text(), start, end, f"urn:c:{rng.randrange(100)}",
                rng.choice(list(MatchedVia)),
                tuple(f"urn:b:{rng.randrange(100)}" for _ in range(rng.randint(0, 2))),
            )
        )
    thematic.sort(key=lambda t: (t.start, t.end, t.concept))

    organizations = sorted(
        (
            OrganizationEntity(text(), *span(), trigger=text())
            for _ in range(rng.randint(0, 2))
        ),
        key=lambda o: (o.start, o.end),
    )

    abstracts = [(rng.choice(["fr", "en"]), text()) for _ in range(rng.randint(0, 2))]
    languages = list(dict.fromkeys(lang for lang, _ in abstracts))
    doc = Document(
        id=f"rand-{rng.randrange(10**6)}",
        source=rng.choice(list(SourceTag)),
        languages=languages,
        title=text(),
        abstracts=abstracts,
        extra=[(rng.choice(["genre", "creator"]), text()) for _ in range(rng.randint(0, 2))],
        flags=["missing-abstract"] if rng.random() < 0.2 else [],
    )
    return ModsTiRecord(
        document=doc, spatial=spatial, organizations=list(organizations),
        temporal=temporal, thematic=thematic,
        provenance=Provenance(
            PIPELINE_VERSION,
            [(s, rng.random()) for s in ("ingest", "spatial", "temporal", "thematic")],
        ),
    )


def test_criterion_4_modsti_roundtrip_100():
    with criterion("4 MODS-TI round-trip (100 randomized records)"):
        rng = random.Random(20260826)
        for _ in range(100):
            rec = _random_record(rng)
            data = to_mods_ti_xml(rec)
            assert parse_mods_ti_xml(data) == rec  # exact equality
            validate_mods_ti(data)  # shipped DTD


# ------------------------------------------------------------ criterion 5

def _bruteforce_counts(gold_spans, pred_spans, mode):
    """All-pairs matcher: enumerate every gold/pred pair, then commit pairs
    in prediction-position order, never reusing a side."""
    pairs = []
    for pi, p in enumerate(sorted(pred_spans, key=lambda s: (s.start, s.end))):
        for gi, g in enumerate(sorted(gold_spans, key=lambda s: (s.start, s.end))):
            if mode is MatchMode.EXACT_SPAN:
                ok = (p.start, p.end) == (g.start, g.end)
            else:
                ok = p.start < g.end and g.start < p.end
            if ok:
                pairs.append((pi, gi))
    used_p, used_g = set(), set()
    tp = 0
    for pi, gi in pairs:
        if pi in used_p or gi in used_g:
            continue
        used_p.add(pi)
        used_g.add(gi)
        tp += 1
    return tp, len(pred_spans) - tp, len(gold_spans) - tp


def test_criterion_5_eval_oracle_equivalence():
    with criterion("5 eval oracle equivalence (20 synthetic docs)"):
        rng = random.Random(99)
        for d in range(20):
            gold_spans, cursor = [], 0
            while cursor < 90 and len(gold_spans) < 6:
                cursor += rng.randint(0, 8)
                end = cursor + rng.randint(1, 8)
                if end > 100:
                    break
                gold_spans.append(GoldSpan(cursor, end, Category.ESA, "x" * (end - cursor)))
                cursor = end
            preds = []
            for _ in range(rng.randint(0, 8)):
                a = rng.randrange(0, 95)
                preds.append(GoldSpan(a, a + rng.randint(1, 8), Category.ESA, "y"))
            doc = GoldDocument(f"d{d}", "x" * 120, gold_spans)
            for mode in MatchMode:
                rep = score([doc], {f"d{d}": preds}, mode)
                got = rep.per_category[Category.ESA]
                expect = _bruteforce_counts(gold_spans, preds, mode)
                assert (got.tp, got.fp, got.fn) == expect  # exact equality


# ------------------------------------------------------------ criterion 6

def _random_entry(rng):
    return IndexEntry(
        doc_id=f"d{rng.randrange(40)}",
        title=rng.choice(["drought study", "flood report", ""]),
        languages=("en",),
        source="OTHER",
        spatial=tuple(
            SpatialPosting(
                rng.choice([None, rng.randrange(1, 15)]), "x", "Absolute", None,
                rng.uniform(-90, 90), rng.uniform(-180, 180),
            )
            for _ in range(rng.randint(0, 3))
        ),
        temporal=tuple(
            TemporalPosting("Date", str(y), str(y), "year")
            for y in (rng.randint(1900, 2100) for _ in range(rng.randint(0, 2)))
        ),
        thematic=tuple(
            ThematicPosting(f"urn:c:{rng.randrange(6)}", ())
            for _ in range(rng.randint(0, 2))
        ),
    )


def _random_query(rng):
    y = rng.randint(1900, 2090)
    return Query(
        place_ids=rng.choice([None, frozenset(rng.sample(range(1, 15), rng.randint(1, 3)))]),
        period=rng.choice([None, (str(y), str(y + rng.randint(0, 20)))]),
        concept_ids=rng.choice(
            [None, frozenset({f"urn:c:{rng.randrange(6)}"})]
        ),
        free_text=rng.choice([None, "drought"]),
    )


def test_criterion_6_index_properties(tmp_path):
    with criterion("6 index properties (200 random queries/corpora)"):
        rng = random.Random(4242)
        for trial in range(200):
            entries = [_random_entry(rng) for _ in range(rng.randint(0, 10))]
            q = _random_query(rng)
            everything = {d for d, _ in query_index(entries, Query())}
            hits = {d for d, _ in query_index(entries, q)}
            # conjunctive monotonicity: any filter shrinks (or keeps) the hit set
            assert hits <= everything
            tighter = Query(
                place_ids=q.place_ids or frozenset({1}),
                period=q.period or ("2000", "2001"),
                concept_ids=q.concept_ids,
                free_text=q.free_text,
            )
            assert {d for d, _ in query_index(entries, tighter)} <= hits


def test_criterion_6b_index_rebuild_idempotent(tmp_path, resources):
    with criterion("6 index idempotent rebuild"):
        gold = load_gold_dir(importlib_resources.files("geodoc") / "resources" / "gold")
        docs = [
            Document(id=g.doc_id, languages=["fr"], title="t", abstracts=[("fr", g.text)])
            for g in gold[:3]
        ]
        from geodoc.pipeline import annotate_document

        records = [annotate_document(d, resources) for d in docs]
        a, b = tmp_path / "a.ndjson", tmp_path / "b.ndjson"
        build_index(records, a)
        build_index(records, b)
        assert a.read_bytes() == b.read_bytes()
        assert load_index(a) == load_index(b)


# ------------------------------------------------------------ criterion 7

SYNTH_SENTENCES_FR = [
    "Le fleuve Sénégal a débordé près de Bayonne en mars {y}.",
    "La sécheresse des années 1970 a touché le Sénégal et Madagascar.",
    "Des pluies venues du golfe de Guinée arrosent la région de {y} à {y2}.",
]
SYNTH_SENTENCES_EN = [
    "Drought along the Willamette River worsened in {y}.",
    "Maize yields near Paris declined during the 1990s.",
    "Cyclones from the Indian Ocean struck between {y} and {y2}.",
]


def test_criterion_7_throughput_sanity(tmp_path, resources):
    with criterion("7 throughput sanity (100 docs < 60 s, stages sum within 5%)"):
        rng = random.Random(7)
        docs_dir = tmp_path / "docs"
        docs_dir.mkdir()
        lines = []
        for i in range(100):
            lang = "fr" if i % 2 else "en"
            bank = SYNTH_SENTENCES_FR if lang == "fr" else SYNTH_SENTENCES_EN
            y = rng.randint(1950, 2020)
            text = " ".join(s.format(y=y, y2=y + 5) for s in rng.sample(bank, 2))
            p = docs_dir / f"doc{i:03d}.xml"
            p.write_text(
                f"<mods><identifier>syn-{i:03d}</identifier>"
                f"<titleInfo><title>Doc {i}</title></titleInfo>"
                f'<abstract lang="{lang}">{text}</abstract></mods>',
                encoding="utf-8",
            )
            lines.append(f"{p}\tOTHER\n")
        manifest = tmp_path / "manifest.tsv"
        manifest.write_text("".join(lines), encoding="utf-8")

        result = run_pipeline(read_manifest(manifest), resources)
        assert result.failures == []
        assert len(result.records) == 100
        assert result.total_seconds < 60.0  # stated budget
        stage_sum = sum(result.timer.seconds.values())
        # per-stage timings must account for the total within 5%
        assert abs(stage_sum - result.total_seconds) <= 0.05 * result.total_seconds


# ------------------------------------------------------------ criterion 8

def test_criterion_8_regression_pin(resources):
    with criterion("8 self-consistency regression pin"):
        gold_dir = importlib_resources.files("geodoc") / "resources" / "gold"
        gold = load_gold_dir(gold_dir)
        reference = json.loads(
            (gold_dir / "reference_report.json").read_text(encoding="utf-8")
        )
        predictions = annotate_gold_corpus(gold, resources)
        for mode in MatchMode:
            report = score(gold, predictions, mode).to_dict()
            assert report == reference["reports"][mode.value]  # byte-exact pin

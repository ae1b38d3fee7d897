import json
from importlib import resources as importlib_resources

import pytest

from geodoc.evaluation import MatchMode, corpus_stats, load_gold_dir, score
from geodoc.goldpipe import annotate_gold_corpus
from geodoc.ingest import Document, SourceTag
from geodoc.modsti import parse_mods_ti_xml, validate_mods_ti
from geodoc.pipeline import STAGES, annotate_document, run_pipeline, write_records


def _gold_dir():
    return importlib_resources.files("geodoc") / "resources" / "gold"


@pytest.fixture(scope="module")
def gold():
    return load_gold_dir(_gold_dir())


@pytest.fixture(scope="module")
def reference():
    return json.loads((_gold_dir() / "reference_report.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="module")
def predictions(gold, resources):
    return annotate_gold_corpus(gold, resources)


class TestGoldCorpus:
    def test_shape(self, gold, reference):
        stats = corpus_stats(gold)
        assert stats == reference["corpusStats"]
        assert stats["documents"] == 10
        assert stats["meanWords"] > 200

    def test_spans_slice_back(self, gold):
        for doc in gold:
            for s in doc.spans:
                assert doc.text[s.start : s.end] == s.surface


class TestRegressionPin:
    """The committed reference report freezes pipeline quality on the gold
    corpus; any scoring drift must be deliberate (rerun the freeze tool)."""

    @pytest.mark.parametrize("mode", [MatchMode.EXACT_SPAN, MatchMode.OVERLAP])
    def test_report_matches_pin(self, gold, predictions, reference, mode):
        report = score(gold, predictions, mode).to_dict()
        assert report == reference["reports"][mode.value]

    def test_exact_overall_band(self, gold, predictions):
        overall = score(gold, predictions, MatchMode.EXACT_SPAN).overall()
        assert overall.f1 >= 0.70
        assert overall.recall >= 0.80

    def test_overlap_never_below_exact(self, gold, predictions):
        exact = score(gold, predictions, MatchMode.EXACT_SPAN)
        overlap = score(gold, predictions, MatchMode.OVERLAP)
        for cat, s in exact.per_category.items():
            assert overlap.per_category[cat].tp >= s.tp


class TestAnnotateDocument:
    def test_multilingual_dispatch(self, resources):
        doc = Document(
            id="multi-1",
            source=SourceTag.ISTEX,
            languages=["fr", "en"],
            title="T",
            abstracts=[
                ("fr", "Le golfe de Guinée en mars 2004."),
                ("en", "Drought near Paris in the 1990s."),
            ],
        )
        rec = annotate_document(doc, resources)
        surfaces = {e.surface for e in rec.spatial}
        assert "golfe de Guinée" in surfaces
        assert "near Paris" in surfaces
        values = {t.value_iso() for t in rec.temporal}
        assert {"2004-03", "1990/1999"} <= values
        assert any(t.concept == "urn:thes:drought" for t in rec.thematic)

    def test_provenance_stage_timings(self, resources):
        doc = Document(id="p-1", languages=["en"], title="T",
                       abstracts=[("en", "Drought near Paris.")])
        rec = annotate_document(doc, resources)
        stages = {s for s, _ in rec.provenance.timings}
        assert {"spatial", "temporal", "thematic"} <= stages
        assert all(sec >= 0 for _, sec in rec.provenance.timings)
        assert set(stages) <= set(STAGES)


class TestRunPipeline:
    def test_end_to_end_records_validate(self, tmp_path, resources):
        doc = tmp_path / "d.xml"
        doc.write_text(
            "<mods><identifier>e2e-1</identifier>"
            "<titleInfo><title>T</title></titleInfo>"
            '<abstract lang="en">Floods along the Willamette River in 1996.</abstract>'
            "</mods>",
            encoding="utf-8",
        )
        manifest = tmp_path / "m.tsv"
        manifest.write_text(f"{doc}\tISTEX\n", encoding="utf-8")
        from geodoc.ingest import read_manifest

        result = run_pipeline(read_manifest(manifest), resources)
        assert result.failures == []
        assert len(result.records) == 1
        out = tmp_path / "records"
        write_records(result.records, out)
        data = (out / "e2e-1.modsti.xml").read_bytes()
        validate_mods_ti(data)
        rec = parse_mods_ti_xml(data)
        assert any(e.surface == "Willamette River" for e in rec.spatial)

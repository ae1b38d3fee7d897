import json

import pytest
from click.testing import CliRunner

from geodoc.cli import main
from geodoc.modsti import parse_mods_ti_xml, validate_mods_ti

MODS = """<?xml version="1.0"?>
<mods>
  <identifier>{doc_id}</identifier>
  <titleInfo><title>Crues du fleuve</title></titleInfo>
  <abstract lang="fr">Le fleuve Sénégal a débordé en mars 2004.
  La sécheresse menace le maïs au Sénégal.</abstract>
</mods>
"""


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    docs = root / "docs"
    docs.mkdir()
    for i in (1, 2):
        (docs / f"doc{i}.xml").write_text(MODS.format(doc_id=f"cli-doc-{i}"), encoding="utf-8")
    manifest = root / "manifest.tsv"
    manifest.write_text(
        "".join(f"{docs / f'doc{i}.xml'}\tISTEX\n" for i in (1, 2)), encoding="utf-8"
    )
    return root


@pytest.fixture(scope="module")
def annotated(workspace):
    out = workspace / "records"
    result = CliRunner().invoke(
        main, ["annotate", str(workspace / "manifest.tsv"), "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    return out


class TestAnnotate:
    def test_writes_one_record_per_document(self, annotated):
        files = sorted(p.name for p in annotated.glob("*.modsti.xml"))
        assert files == ["cli-doc-1.modsti.xml", "cli-doc-2.modsti.xml"]
        for p in annotated.glob("*.modsti.xml"):
            validate_mods_ti(p.read_bytes())

    def test_reports_stage_timings(self, workspace):
        result = CliRunner().invoke(
            main, ["annotate", str(workspace / "manifest.tsv"), "--out", str(workspace / "r2")]
        )
        assert "annotated 2 documents" in result.output
        for stage in ("ingest", "spatial", "temporal", "thematic"):
            assert stage in result.output

    def test_record_contains_expected_annotations(self, annotated):
        rec = parse_mods_ti_xml((annotated / "cli-doc-1.modsti.xml").read_bytes())
        assert any(e.surface == "fleuve Sénégal" for e in rec.spatial)
        assert any(t.surface == "mars 2004" for t in rec.temporal)
        assert any(t.concept == "urn:thes:maize" for t in rec.thematic)

    def test_failure_is_reported_not_fatal(self, workspace):
        bad = workspace / "bad.xml"
        bad.write_text("<mods><broken", encoding="utf-8")
        manifest = workspace / "mixed.tsv"
        manifest.write_text(
            f"{workspace / 'docs' / 'doc1.xml'}\tISTEX\n{bad}\tISTEX\n", encoding="utf-8"
        )
        result = CliRunner().invoke(
            main, ["annotate", str(manifest), "--out", str(workspace / "r3")]
        )
        assert result.exit_code == 0
        assert "annotated 1 documents (1 failed)" in result.output


class TestIndexAndSearch:
    @pytest.fixture(scope="class")
    @staticmethod
    def index_path(workspace, annotated):
        out = workspace / "corpus.ndjson"
        result = CliRunner().invoke(main, ["index", str(annotated), "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["documentCount"] == 2
        return out

    def test_search_by_place(self, index_path):
        result = CliRunner().invoke(
            main, ["search", "--index", str(index_path), "--place", "1002"]
        )
        lines = result.output.strip().splitlines()
        assert [ln.split("\t")[0] for ln in lines] == ["cli-doc-1", "cli-doc-2"]

    def test_search_conjunction_no_hit(self, index_path):
        result = CliRunner().invoke(
            main,
            ["search", "--index", str(index_path), "--place", "1002", "--period", "1800/1850"],
        )
        assert result.output.strip() == ""

    def test_search_by_period_and_concept(self, index_path):
        result = CliRunner().invoke(
            main,
            [
                "search", "--index", str(index_path),
                "--period", "2004/2004", "--concept", "urn:thes:maize",
            ],
        )
        assert len(result.output.strip().splitlines()) == 2


class TestEval:
    def test_json_report(self, workspace, annotated):
        gold_dir = workspace / "gold"
        gold_dir.mkdir()
        text = (
            "Le fleuve Sénégal a débordé en mars 2004.\n"
            "  La sécheresse menace le maïs au Sénégal."
        )
        gold_dir.joinpath("g1.json").write_text(
            json.dumps(
                {
                    "docId": "cli-doc-1",
                    "text": text,
                    "spans": [
                        {"start": 3, "end": 17, "category": "ESA", "surface": "fleuve Sénégal"},
                        {"start": 31, "end": 40, "category": "Temporal", "surface": "mars 2004"},
                    ],
                },
                ensure_ascii=False,
            ),
            encoding="utf-8",
        )
        pred_dir = workspace / "pred1"
        pred_dir.mkdir()
        (pred_dir / "cli-doc-1.modsti.xml").write_bytes(
            (annotated / "cli-doc-1.modsti.xml").read_bytes()
        )
        result = CliRunner().invoke(
            main,
            ["eval", "--gold", str(gold_dir), "--pred", str(pred_dir), "--json"],
        )
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["categories"]["ESA"]["tp"] == 1
        assert report["categories"]["Temporal"]["tp"] == 1

    def test_table_mode_runs(self, workspace):
        result = CliRunner().invoke(
            main,
            ["eval", "--gold", str(workspace / "gold"), "--pred", str(workspace / "pred1")],
        )
        assert result.exit_code == 0
        assert "ESA" in result.output and "Overall" in result.output


def test_help_lists_commands():
    result = CliRunner().invoke(main, ["--help"])
    for cmd in ("annotate", "index", "search", "eval", "serve"):
        assert cmd in result.output

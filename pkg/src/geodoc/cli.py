"""Command-line entry points: annotate, index, eval, serve."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import PipelineConfig, DATA_ROOT_ENV
from .evaluation import (
    GoldSpan,
    MatchMode,
    load_gold_dir,
    score,
)
from .indexer import Query as IndexQuery, build_index, load_index, query_index
from .ingest import read_manifest
from .modsti import parse_mods_ti_xml
from .pipeline import Resources, run_pipeline, write_records


def _config_from(config_path: str | None, **overrides) -> PipelineConfig:
    cfg = PipelineConfig.from_file(config_path) if config_path else PipelineConfig()
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    return cfg


@click.group()
def main():
    """Annotation pipeline for scientific-paper metadata."""


@main.command()
@click.argument("manifest", type=click.Path(exists=True))
@click.option("--rules", "rules_dir", type=click.Path(exists=True), help="Rule file directory.")
@click.option("--gazetteer", "gazetteer_path", type=click.Path(exists=True), help="Gazetteer TSV.")
@click.option("--skos", "skos_path", type=click.Path(exists=True), help="SKOS thesaurus XML.")
@click.option("--config", "config_path", type=click.Path(exists=True), help="JSON config file.")
@click.option("--out", "out_dir", type=click.Path(), required=True, help="Output directory.")
def annotate(manifest, rules_dir, gazetteer_path, skos_path, config_path, out_dir):
    """Annotate every document listed in MANIFEST."""
    cfg = _config_from(
        config_path,
        rules_dir=rules_dir,
        gazetteer_path=gazetteer_path,
        skos_path=skos_path,
    )
    res = Resources.load(cfg)
    result = run_pipeline(read_manifest(manifest), res)
    write_records(result.records, out_dir)
    for path, err in result.failures:
        click.echo(f"FAILED {path}: {err}", err=True)
    click.echo(
        f"annotated {len(result.records)} documents "
        f"({len(result.failures)} failed) in {result.total_seconds:.2f}s"
    )
    for stage, secs in sorted(result.timer.seconds.items()):
        click.echo(f"  {stage}: {secs:.2f}s")


@main.command()
@click.argument("records_dir", type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(), required=True, help="NDJSON index file.")
def index(records_dir, out_path):
    """Build the NDJSON index from a directory of annotated records."""
    records = [
        parse_mods_ti_xml(p.read_bytes())
        for p in sorted(Path(records_dir).glob("*.modsti.xml"))
    ]
    summary = build_index(records, out_path)
    click.echo(summary.to_json())


@main.command()
@click.option("--index", "index_path", type=click.Path(exists=True), required=True)
@click.option("--place", "place_ids", multiple=True, type=int, help="Gazetteer id filter.")
@click.option("--period", help="ISO period start/end, e.g. 1995/1996.")
@click.option("--concept", "concept_ids", multiple=True, help="Concept id (incl. broader).")
@click.option("--text", "free_text", help="Free-text filter.")
def search(index_path, place_ids, period, concept_ids, free_text):
    """Query an NDJSON index (conjunctive filters, match-count ranking)."""
    q = IndexQuery(
        place_ids=frozenset(place_ids) or None,
        period=tuple(period.split("/", 1)) if period else None,
        concept_ids=frozenset(concept_ids) or None,
        free_text=free_text,
    )
    for doc_id, matches in query_index(load_index(index_path), q):
        click.echo(f"{doc_id}\t{matches}")


@main.command("eval")
@click.option("--gold", "gold_dir", type=click.Path(exists=True), required=True,
              help="Directory of gold JSON documents.")
@click.option("--pred", "pred_dir", type=click.Path(exists=True), required=True,
              help="Directory of annotated records to score.")
@click.option("--mode", type=click.Choice(["exact", "overlap"]), default="exact")
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
def eval_cmd(gold_dir, pred_dir, mode, as_json):
    """Score annotated records against a gold corpus."""
    from .goldpipe import predictions_from_records_dir

    gold = load_gold_dir(gold_dir)
    predicted = predictions_from_records_dir(pred_dir)
    m = MatchMode.EXACT_SPAN if mode == "exact" else MatchMode.OVERLAP
    report = score(gold, predicted, m)
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        click.echo(report.to_table())


@main.command()
@click.option("--port", default=8000, type=int)
@click.option("--host", default="127.0.0.1")
@click.option("--data", "data_dir", type=click.Path(), default=None,
              help=f"Data root (default ${DATA_ROOT_ENV} or ./geodoc-data).")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def serve(port, host, data_dir, config_path):
    """Run the review-workflow HTTP service."""
    import uvicorn

    from .service import create_app

    cfg = PipelineConfig.from_file(config_path) if config_path else PipelineConfig()
    uvicorn.run(create_app(data_dir=data_dir, config=cfg), host=host, port=port)


if __name__ == "__main__":
    main()

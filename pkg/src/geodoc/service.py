"""Review-workflow HTTP backend.

Storage is a flat directory per corpus under the data root:
uploads/ (originals), records/ (annotated XML), review.jsonl (append-only
decision journal), status.json, stats.json. No database; everything is
inspectable with a text editor.
"""

from __future__ import annotations

import io
import json
import threading
import time
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, File, HTTPException, Query, Request, UploadFile
from fastapi.responses import PlainTextResponse, Response

from .config import PipelineConfig, data_root
from .ingest import detect_format, parse_document, SourceTag
from .modsti import ModsTiRecord, parse_mods_ti_xml, to_mods_ti_xml
from .pipeline import Resources, StageTimer, annotate_document
from .spatial import SpatialKind

CATEGORIES = ("Spatial", "Organization", "Temporal", "Thematic")
DECISIONS = ("Accepted", "Rejected")
STATUSES = ("Queued", "Running", "Done", "Failed")


@dataclass
class CorpusStore:
    root: Path
    lock: threading.Lock = field(default_factory=threading.Lock)

    # ---- paths

    def corpus_dir(self, corpus_id: str) -> Path:
        return self.root / corpus_id

    def _status_path(self, corpus_id: str) -> Path:
        return self.corpus_dir(corpus_id) / "status.json"

    # ---- status

    def read_status(self, corpus_id: str) -> dict:
        p = self._status_path(corpus_id)
        if not p.exists():
            raise KeyError(corpus_id)
        return json.loads(p.read_text(encoding="utf-8"))

    def write_status(self, corpus_id: str, status: dict) -> None:
        p = self._status_path(corpus_id)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(json.dumps(status, sort_keys=True), encoding="utf-8")

    # ---- review journal (append-only, last write wins)

    def append_review(self, corpus_id: str, doc_id: str, ann_id: str, decision: str) -> None:
        with self.lock:
            with open(self.corpus_dir(corpus_id) / "review.jsonl", "a", encoding="utf-8") as fh:
                fh.write(json.dumps(
                    {"docId": doc_id, "annotationId": ann_id, "decision": decision,
                     "at": time.time()},
                ) + "\n")

    def review_flags(self, corpus_id: str) -> dict[tuple[str, str], str]:
        p = self.corpus_dir(corpus_id) / "review.jsonl"
        flags: dict[tuple[str, str], str] = {}
        if p.exists():
            for line in p.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                rec = json.loads(line)
                flags[(rec["docId"], rec["annotationId"])] = rec["decision"]
        return flags

    # ---- records

    def record_path(self, corpus_id: str, doc_id: str) -> Path:
        safe = "".join(c if c.isalnum() or c in "-._" else "_" for c in doc_id)
        return self.corpus_dir(corpus_id) / "records" / f"{safe}.modsti.xml"

    def load_record(self, corpus_id: str, doc_id: str) -> ModsTiRecord:
        p = self.record_path(corpus_id, doc_id)
        if not p.exists():
            raise KeyError(doc_id)
        return parse_mods_ti_xml(p.read_bytes())


def annotation_ids(rec: ModsTiRecord) -> list[tuple[str, str, object]]:
    """Stable per-record annotation ids: (id, category, annotation).

    Ids follow serialized order, so they survive a round-trip to disk.
    """
    out: list[tuple[str, str, object]] = []
    spatial = sorted(rec.spatial, key=lambda e: (e.start, e.end, e.kind.value))
    for i, e in enumerate(spatial):
        out.append((f"s{i}", "Spatial", e))
    for i, o in enumerate(sorted(rec.organizations, key=lambda o: (o.start, o.end))):
        out.append((f"o{i}", "Organization", o))
    for i, t in enumerate(sorted(rec.temporal, key=lambda t: (t.start, t.end))):
        out.append((f"t{i}", "Temporal", t))
    for i, th in enumerate(sorted(rec.thematic, key=lambda t: (t.start, t.end, t.concept))):
        out.append((f"h{i}", "Thematic", th))
    return out


def _annotation_payload(ann_id: str, category: str, ann, flag: str) -> dict:
    base = {"id": ann_id, "category": category, "flag": flag,
            "start": ann.start, "end": ann.end, "surface": ann.surface}
    if category == "Spatial":
        base.update(
            kind=ann.kind.value,
            relation=ann.relation.value if ann.relation else None,
            confidence=ann.confidence,
            footprint=(
                {"ref": ann.footprint.gazetteer_id, "lat": ann.footprint.lat,
                 "lon": ann.footprint.lon}
                if ann.footprint else None
            ),
        )
    elif category == "Organization":
        base.update(trigger=ann.trigger)
    elif category == "Temporal":
        base.update(temporalCategory=ann.category.value, value=ann.value_iso())
    elif category == "Thematic":
        base.update(concept=ann.concept, matchedVia=ann.matched_via.value,
                    broader=list(ann.broader_chain))
    return base


def apply_review(rec: ModsTiRecord, flags: dict[tuple[str, str], str]) -> ModsTiRecord:
    """Drop rejected annotations; Pending and Accepted are kept."""
    doc_id = rec.document.id
    keep_ids = {
        ann_id
        for ann_id, _, _ in annotation_ids(rec)
        if flags.get((doc_id, ann_id)) != "Rejected"
    }
    kept_spatial, kept_orgs, kept_temporal, kept_thematic = [], [], [], []
    for ann_id, category, ann in annotation_ids(rec):
        if ann_id not in keep_ids:
            continue
        if category == "Spatial":
            kept_spatial.append(ann)
        elif category == "Organization":
            kept_orgs.append(ann)
        elif category == "Temporal":
            kept_temporal.append(ann)
        else:
            kept_thematic.append(ann)
    return ModsTiRecord(
        document=rec.document,
        spatial=kept_spatial,
        organizations=kept_orgs,
        temporal=kept_temporal,
        thematic=kept_thematic,
        provenance=rec.provenance,
    )


def create_app(
    data_dir: str | Path | None = None,
    config: PipelineConfig | None = None,
    synchronous_jobs: bool = False,
) -> FastAPI:
    """Build the application. `synchronous_jobs` runs the pipeline inline,
    which test clients rely on for determinism."""
    config = config or PipelineConfig()
    store = CorpusStore(root=data_root(str(data_dir) if data_dir else None))
    store.root.mkdir(parents=True, exist_ok=True)
    resources = Resources.load(config)
    app = FastAPI(title="geodoc review service")

    def _run_job(corpus_id: str) -> None:
        status = store.read_status(corpus_id)
        status["status"] = "Running"
        store.write_status(corpus_id, status)
        timer = StageTimer()
        t_start = time.perf_counter()
        doc_ids: list[str] = []
        failed_docs: list[dict] = []
        uploads = sorted((store.corpus_dir(corpus_id) / "uploads").iterdir())
        for i, up in enumerate(uploads):
            status["progress"] = {"done": i, "total": len(uploads)}
            store.write_status(corpus_id, status)
            t0 = time.perf_counter()
            try:
                data = up.read_bytes()
                fmt = detect_format(data)
                doc = parse_document(data, fmt, default_lang=config.default_language)
            except Exception as exc:
                timer.add("ingest", time.perf_counter() - t0)
                failed_docs.append({"file": up.name, "error": str(exc)})
                continue
            timer.add("ingest", time.perf_counter() - t0)
            rec = annotate_document(doc, resources, timer)
            t0 = time.perf_counter()
            p = store.record_path(corpus_id, doc.id)
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_bytes(to_mods_ti_xml(rec))
            timer.add("index", time.perf_counter() - t0)
            doc_ids.append(doc.id)
        total = time.perf_counter() - t_start
        stats = {
            "stageSeconds": timer.seconds,
            "totalSeconds": total,
            "documentCount": len(doc_ids),
            "secondsPerDocument": total / len(doc_ids) if doc_ids else 0.0,
        }
        (store.corpus_dir(corpus_id) / "stats.json").write_text(
            json.dumps(stats, sort_keys=True), encoding="utf-8"
        )
        status.update(
            status="Done",
            documents=doc_ids,
            failedDocuments=failed_docs,
            progress={"done": len(uploads), "total": len(uploads)},
        )
        store.write_status(corpus_id, status)

    @app.post("/corpora", status_code=201)
    async def upload_corpus(files: list[UploadFile] = File(default=[])):
        if not files:
            raise HTTPException(status_code=400, detail="EmptyUpload")
        corpus_id = f"c{int(time.time() * 1000):x}-{len(list(store.root.iterdir()))}"
        updir = store.corpus_dir(corpus_id) / "uploads"
        updir.mkdir(parents=True)
        for i, f in enumerate(files):
            name = f.filename or f"upload-{i}"
            (updir / f"{i:04d}-{Path(name).name}").write_bytes(await f.read())
        store.write_status(
            corpus_id,
            {"corpusId": corpus_id, "status": "Queued", "documents": [],
             "failedDocuments": [], "progress": {"done": 0, "total": len(files)}},
        )
        if synchronous_jobs:
            _run_job(corpus_id)
        else:
            threading.Thread(target=_run_job, args=(corpus_id,), daemon=True).start()
        return {"corpusId": corpus_id}

    @app.get("/corpora")
    def list_corpora():
        out = []
        for d in sorted(store.root.iterdir()):
            if not (d / "status.json").exists():
                continue
            st = store.read_status(d.name)
            out.append(
                {
                    "corpusId": st["corpusId"],
                    "status": st["status"],
                    "documentCount": len(st.get("documents", [])),
                    "failedCount": len(st.get("failedDocuments", [])),
                    "progress": st.get("progress"),
                }
            )
        return out

    def _require_corpus(corpus_id: str, done: bool = False) -> dict:
        try:
            st = store.read_status(corpus_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="NotFound")
        if done and st["status"] != "Done":
            raise HTTPException(status_code=409, detail="CorpusNotDone")
        return st

    @app.get("/corpora/{corpus_id}/documents/{doc_id}")
    def get_document(corpus_id: str, doc_id: str, categories: str | None = Query(default=None)):
        _require_corpus(corpus_id, done=True)
        try:
            rec = store.load_record(corpus_id, doc_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="NotFound")
        wanted = set(CATEGORIES)
        if categories:
            wanted = {c.strip() for c in categories.split(",") if c.strip()}
            bad = wanted - set(CATEGORIES)
            if bad:
                raise HTTPException(status_code=422, detail=f"unknown categories {sorted(bad)}")
        flags = store.review_flags(corpus_id)
        anns = [
            _annotation_payload(ann_id, category, ann,
                                flags.get((doc_id, ann_id), "Pending"))
            for ann_id, category, ann in annotation_ids(rec)
            if category in wanted
        ]
        return {
            "corpusId": corpus_id,
            "docId": doc_id,
            "title": rec.document.title,
            "abstracts": [{"lang": l, "text": t} for l, t in rec.document.abstracts],
            "annotations": anns,
        }

    @app.post("/corpora/{corpus_id}/documents/{doc_id}/annotations/{ann_id}/review")
    async def review_annotation(corpus_id: str, doc_id: str, ann_id: str, request: Request):
        _require_corpus(corpus_id, done=True)
        body = await request.json()
        decision = body.get("decision")
        if decision not in DECISIONS:
            raise HTTPException(status_code=422, detail=f"decision must be one of {DECISIONS}")
        try:
            rec = store.load_record(corpus_id, doc_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="NotFound")
        if ann_id not in {a for a, _, _ in annotation_ids(rec)}:
            raise HTTPException(status_code=404, detail="NotFound")
        store.append_review(corpus_id, doc_id, ann_id, decision)
        return {"docId": doc_id, "annotationId": ann_id, "flag": decision}

    @app.get("/corpora/{corpus_id}/export")
    def export_corpus(corpus_id: str, docs: str | None = Query(default=None)):
        st = _require_corpus(corpus_id, done=True)
        selection = st.get("documents", [])
        if docs is not None:
            wanted = [d for d in docs.split(",") if d]
            missing = set(wanted) - set(selection)
            if missing:
                raise HTTPException(status_code=404, detail=f"unknown docs {sorted(missing)}")
            selection = wanted
        flags = store.review_flags(corpus_id)
        buf = io.BytesIO()
        # fixed timestamps + stored entries keep the archive byte-deterministic
        with zipfile.ZipFile(buf, "w", compression=zipfile.ZIP_STORED) as zf:
            manifest = {"corpusId": corpus_id, "documents": list(selection)}
            zf.writestr(
                zipfile.ZipInfo("manifest.json", date_time=(1980, 1, 1, 0, 0, 0)),
                json.dumps(manifest, sort_keys=True) + "\n",
            )
            for doc_id in selection:
                rec = apply_review(store.load_record(corpus_id, doc_id), flags)
                name = store.record_path(corpus_id, doc_id).name
                zf.writestr(
                    zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0)),
                    to_mods_ti_xml(rec),
                )
        return Response(
            content=buf.getvalue(),
            media_type="application/zip",
            headers={"Content-Disposition": f'attachment; filename="{corpus_id}.zip"'},
        )

    @app.get("/corpora/{corpus_id}/stats")
    def run_stats(corpus_id: str):
        _require_corpus(corpus_id, done=True)
        p = store.corpus_dir(corpus_id) / "stats.json"
        if not p.exists():
            raise HTTPException(status_code=404, detail="NotFound")
        return json.loads(p.read_text(encoding="utf-8"))

    @app.get("/healthz", response_class=PlainTextResponse)
    def healthz():
        return "ok"

    return app

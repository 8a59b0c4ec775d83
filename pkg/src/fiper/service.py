"""HTTP API serving datasets, bundles, summaries, views and study scoring.

The store is an immutable snapshot loaded from a data directory at
startup; requests only read it. POST /api/ingest builds and validates a
complete replacement store and swaps it atomically (a single attribute
assignment), so concurrent readers see either the old snapshot or the new
one, never a mix. Responses are serialized with a fixed, compact JSON
encoding so identical requests against an unchanged store return
byte-identical bodies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, File, HTTPException, Request, Response, UploadFile
from fastapi.responses import FileResponse

from .wire import encode_json
from .documents import (
    Dataset,
    bundle_to_dict,
    load_dataset,
    parse_bundle,
    parse_schema,
)
from .errors import DocumentError, FiperError, StoreLoadError
from .model import DatasetSchema, ExplanationBundle
from .modalities import blocks_to_dict, render_block_modality, render_text_modality
from .stats import FeatureSummary, summarize_dataset
from .study import parse_responses_document, parse_truths_document, score_study
from .svg import DEFAULT_GEOMETRY, render_svg
from .view import (
    RowFilter,
    RowSort,
    ViewOptions,
    build_fiper_view,
    serialize_view,
    summary_to_dict,
)

__all__ = ["Store", "DatasetEntry", "load_store", "create_app", "serve"]

_FILTERS = {"all": RowFilter.ALL_FEATURES, "rule": RowFilter.RULE_ONLY}
_SORTS = {"abs": RowSort.ABS_IMPORTANCE, "schema": RowSort.SCHEMA_ORDER}


@dataclass(frozen=True)
class DatasetEntry:
    schema: DatasetSchema
    dataset: Dataset
    summaries: dict[str, FeatureSummary]


@dataclass(frozen=True)
class Store:
    """Immutable snapshot of everything the API serves."""

    datasets: dict[str, DatasetEntry] = field(default_factory=dict)
    bundles: dict[str, ExplanationBundle] = field(default_factory=dict)

    def entry_for_bundle(self, bundle: ExplanationBundle) -> DatasetEntry:
        return self.datasets[bundle.schema_ref]


def _build_store(schemas: dict[str, str], csvs: dict[str, str],
                 bundle_docs: list[tuple[str, str]]) -> Store:
    """Assemble and fully validate a store; raises on the first problem."""
    datasets: dict[str, DatasetEntry] = {}
    for name, text in schemas.items():
        schema = parse_schema(text)
        key = schema.id or name
        if key in datasets:
            raise StoreLoadError(f"duplicate dataset id {key!r}", path=name)
        if key not in csvs:
            raise StoreLoadError(f"no dataset CSV for schema {key!r}", path=name)
        dataset = load_dataset(csvs[key], schema, source=key)
        datasets[key] = DatasetEntry(schema, dataset, summarize_dataset(dataset))
    for key in csvs:
        if key not in datasets:
            raise StoreLoadError(f"dataset CSV {key!r} has no schema", path=key)
    bundles: dict[str, ExplanationBundle] = {}
    for name, text in bundle_docs:
        try:
            head = json.loads(text) if text.lstrip().startswith("{") else {}
        except json.JSONDecodeError as exc:
            raise StoreLoadError(f"bundle {name!r} is not valid JSON: {exc}",
                                 path=name) from None
        ref = head.get("schema_ref")
        if ref not in datasets:
            raise StoreLoadError(
                f"bundle {name!r} references unknown dataset {ref!r}", path=name)
        bundle = parse_bundle(text, datasets[ref].schema)
        if bundle.id in bundles:
            raise StoreLoadError(f"duplicate bundle id {bundle.id!r}", path=name)
        bundles[bundle.id] = bundle
    return Store(datasets, bundles)


def load_store(data_dir: str | Path) -> Store:
    """Load a data directory: ``*.schema.json`` + ``<id>.csv`` pairs and
    ``*.bundle.json`` files (searched recursively). Problems are reported
    with the offending file path."""
    root = Path(data_dir)
    if not root.is_dir():
        raise StoreLoadError(f"data directory {root} is not readable", path=str(root))
    schemas: dict[str, str] = {}
    csvs: dict[str, str] = {}
    bundle_docs: list[tuple[str, str]] = []
    try:
        for path in sorted(root.rglob("*.schema.json")):
            schemas[path.name.removesuffix(".schema.json")] = path.read_text()
        for path in sorted(root.rglob("*.csv")):
            csvs[path.stem] = path.read_text()
        for path in sorted(root.rglob("*.bundle.json")):
            bundle_docs.append((str(path.relative_to(root)), path.read_text()))
        return _build_store(schemas, csvs, bundle_docs)
    except FiperError as exc:
        raise StoreLoadError(f"{root}: {exc.message}", path=exc.path) from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise StoreLoadError(f"{root}: {exc}", path=str(root)) from exc


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(content=encode_json(payload), status_code=status_code,
                    media_type="application/json")


def _error(status: int, code: str, message: str, path: str) -> Response:
    return _json_response({"code": code, "message": message, "path": path}, status)


_DEFAULT_INDEX = """<!doctype html>
<html><head><meta charset="utf-8"><title>fiper</title></head>
<body><h1>fiper API</h1>
<p>No UI bundle is installed. The API lives under <code>/api</code>;
start with <a href="/api/explanations">/api/explanations</a>.</p>
</body></html>
"""


def create_app(store: Store, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="fiper", docs_url=None, redoc_url=None)
    app.state.store = store
    ui_root = Path(ui_dir) if ui_dir else None

    @app.exception_handler(FiperError)
    async def _fiper_error(request: Request, exc: FiperError):
        return _error(400, exc.code, exc.message, exc.path or request.url.path)

    @app.exception_handler(404)
    async def _not_found(request: Request, exc):
        detail = getattr(exc, "detail", "not found")
        return _error(404, "not_found", str(detail), request.url.path)

    def current() -> Store:
        return app.state.store

    def get_bundle(bundle_id: str) -> ExplanationBundle:
        bundle = current().bundles.get(bundle_id)
        if bundle is None:
            raise HTTPException(404, f"unknown explanation {bundle_id!r}")
        return bundle

    @app.get("/api/datasets")
    def list_datasets():
        store = current()
        return _json_response({
            "datasets": [
                {"id": key, "features": len(entry.schema.features),
                 "rows": len(entry.dataset)}
                for key, entry in sorted(store.datasets.items())
            ]
        })

    @app.get("/api/datasets/{dataset_id}/schema")
    def get_schema(dataset_id: str):
        entry = current().datasets.get(dataset_id)
        if entry is None:
            raise HTTPException(404, f"unknown dataset {dataset_id!r}")
        schema = entry.schema
        return _json_response({
            "id": dataset_id,
            "target": {"name": schema.target_name,
                       "classes": list(schema.target_classes)},
            "features": [
                {"name": f.name, "kind": f.kind.value, "domain": list(f.domain)}
                for f in schema.features
            ],
        })

    @app.get("/api/features/{dataset_id}/{feature}")
    def get_feature_summary(dataset_id: str, feature: str):
        entry = current().datasets.get(dataset_id)
        if entry is None:
            raise HTTPException(404, f"unknown dataset {dataset_id!r}")
        summary = entry.summaries.get(feature)
        if summary is None:
            raise HTTPException(404, f"unknown feature {feature!r}")
        return _json_response({"dataset": dataset_id, "feature": feature,
                               "summary": _summary_payload(summary)})

    @app.get("/api/explanations")
    def list_explanations():
        store = current()
        return _json_response({
            "explanations": [
                {"id": b.id, "schema_ref": b.schema_ref, "prediction": b.prediction,
                 "premise_size": len(b.rule.premise)}
                for _, b in sorted(store.bundles.items())
            ]
        })

    @app.get("/api/explanations/{bundle_id}")
    def get_explanation(bundle_id: str):
        return _json_response(bundle_to_dict(get_bundle(bundle_id)))

    @app.get("/api/explanations/{bundle_id}/view")
    def get_view(bundle_id: str, filter: str = "all", sort: str = "abs"):
        bundle = get_bundle(bundle_id)
        options = _view_options(filter, sort)
        entry = current().entry_for_bundle(bundle)
        view = build_fiper_view(bundle, entry.summaries, options)
        return _json_response(serialize_view(view))

    @app.get("/api/explanations/{bundle_id}/svg")
    def get_svg(bundle_id: str, filter: str = "all", sort: str = "abs"):
        bundle = get_bundle(bundle_id)
        options = _view_options(filter, sort)
        entry = current().entry_for_bundle(bundle)
        view = build_fiper_view(bundle, entry.summaries, options)
        return Response(content=render_svg(view, DEFAULT_GEOMETRY),
                        media_type="image/svg+xml")

    @app.get("/api/explanations/{bundle_id}/modality/{name}")
    def get_modality(bundle_id: str, name: str):
        bundle = get_bundle(bundle_id)
        entry = current().entry_for_bundle(bundle)
        if name == "text":
            return Response(content=render_text_modality(bundle, entry.schema),
                            media_type="text/plain; charset=utf-8")
        if name == "blocks":
            return _json_response(blocks_to_dict(render_block_modality(bundle)))
        raise HTTPException(404, f"unknown modality {name!r} (text or blocks)")

    @app.post("/api/ingest")
    async def ingest(schema_file: UploadFile = File(alias="schema"),
                     dataset: UploadFile = File(),
                     bundles: list[UploadFile] = File()):
        try:
            schema_text = (await schema_file.read()).decode("utf-8")
            csv_text = (await dataset.read()).decode("utf-8")
            bundle_docs = [
                (up.filename or f"bundle[{i}]", (await up.read()).decode("utf-8"))
                for i, up in enumerate(bundles)
            ]
        except UnicodeDecodeError as exc:
            return _error(400, "document_error", f"upload is not UTF-8: {exc}",
                          "/api/ingest")
        parsed = parse_schema(schema_text)
        key = parsed.id or (schema_file.filename or "dataset").removesuffix(".schema.json")
        new_store = _build_store({key: schema_text}, {key: csv_text}, bundle_docs)
        app.state.store = new_store  # atomic swap
        return _json_response({
            "datasets": sorted(new_store.datasets),
            "bundles": sorted(new_store.bundles),
        })

    @app.post("/api/study/score")
    async def study_score(request: Request):
        try:
            payload = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _error(400, "document_error", f"body is not valid JSON: {exc}",
                          "/api/study/score")
        if not isinstance(payload, dict):
            return _error(400, "document_error", "body must be a JSON object",
                          "/api/study/score")
        truths = parse_truths_document(json.dumps(payload.get("truths", {})))
        responses = parse_responses_document(json.dumps(
            {"responses": payload.get("responses", [])}))
        baseline = payload.get("baseline")
        return _json_response(score_study(truths, responses, baseline))

    @app.get("/")
    def index():
        if ui_root is not None and (ui_root / "index.html").is_file():
            return FileResponse(ui_root / "index.html", media_type="text/html")
        return Response(content=_DEFAULT_INDEX, media_type="text/html")

    @app.get("/assets/{path:path}")
    def assets(path: str):
        if ui_root is None:
            raise HTTPException(404, "no UI assets installed")
        base = (ui_root / "assets").resolve()
        target = (base / path).resolve()
        if not str(target).startswith(str(base)) or not target.is_file():
            raise HTTPException(404, f"no asset {path!r}")
        media = "application/javascript" if target.suffix == ".js" else None
        return FileResponse(target, media_type=media)

    return app



def _view_options(filter_param: str, sort_param: str) -> ViewOptions:
    if filter_param not in _FILTERS:
        raise DocumentError(f"filter must be one of {sorted(_FILTERS)}", path="filter")
    if sort_param not in _SORTS:
        raise DocumentError(f"sort must be one of {sorted(_SORTS)}", path="sort")
    return ViewOptions(filter=_FILTERS[filter_param], sort=_SORTS[sort_param])


def _summary_payload(summary: FeatureSummary) -> dict:
    return summary_to_dict(summary)


def serve(data_dir: str | Path, host: str = "127.0.0.1", port: int = 8000,
          ui_dir: str | Path | None = None):
    """Load the store and run the API under uvicorn (blocking)."""
    import uvicorn

    app = create_app(load_store(data_dir), ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")

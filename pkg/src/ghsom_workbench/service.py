"""HTTP session service: upload, train, inspect, refine, extract, filter.

Sessions live in memory. Within a session, reads are concurrent while
writes (data/corpus upload, train, refine, snapshot import) are exclusive
and non-queuing: a second writer gets a conflict instead of waiting, since
a human analyst is mid-decision and stale requests are dangerous. Mutations
build a fresh hierarchy object and swap it in atomically, so readers only
ever observe pre- or post-operation states.

Every train/refine requires a caller-supplied seed; the server never
invents entropy, which is what makes audit replay reproduce hierarchies
exactly.
"""

from __future__ import annotations

import threading
import uuid
from contextlib import contextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .c45 import LabeledInstance, extract_rules, induce, render_text, tree_to_json
from .colors import channel_ranges, fit_pca, project, unit_color
from .dataset import Dataset, build_features
from .errors import (
    ContractError,
    CsvValidationError,
    FingerprintMismatchError,
    PathNotFoundError,
    PathSyntaxError,
    RefineConflictError,
    RuleConfigError,
    WorkbenchError,
)
from .filtering import (
    ListSink,
    emit,
    evaluate,
    parse_rules,
    rule_attributes,
    rules_to_json,
)
from .hierarchy import Hierarchy, GrowthParams, format_path, grow, resolve_path
from .interactive import RefineRequest, refine
from .records import parse_records
from .snapshot import export_snapshot, import_snapshot, snapshot_bytes
from .tfidf import Corpus, TopLConfig, build_corpus, comment_features

DEFAULT_PARAMS = GrowthParams()


class SessionState:
    def __init__(self, params: GrowthParams):
        self.id = uuid.uuid4().hex
        self.params = params
        self.csv_text: str | None = None
        self.records = None
        self.corpus: Corpus | None = None
        self.tfidf_pairs: list[tuple[float, float]] | None = None
        self.dataset: Dataset | None = None
        self.hierarchy: Hierarchy | None = None
        self.audit: list[dict] = []
        self._write_lock = threading.Lock()

    @contextmanager
    def writer(self):
        if not self._write_lock.acquire(blocking=False):
            raise RefineConflictError("another write operation is in progress")
        try:
            yield
        finally:
            self._write_lock.release()

    def rebuild_features(self) -> None:
        if self.records is None or self.corpus is None:
            return
        cfg = TopLConfig()
        self.tfidf_pairs = []
        for r in self.records:
            tmax, tsum, _ = comment_features(r.comment, self.corpus, cfg)
            self.tfidf_pairs.append((tmax, tsum))
        self.dataset = build_features(self.records, self.tfidf_pairs)
        self.hierarchy = None  # features changed; any hierarchy is stale


class ParamsPatch(BaseModel):
    tau1: float | None = None
    tau2: float | None = None
    lam: int | None = None
    alpha: float | None = None
    beta: float | None = None
    max_depth: int | None = None
    max_insertions: int | None = None

    def apply(self, base: GrowthParams) -> GrowthParams:
        overrides = {k: v for k, v in self.model_dump().items() if v is not None}
        return base.replace(**overrides)


class CreateSessionBody(BaseModel):
    params: ParamsPatch | None = None


class DataBody(BaseModel):
    csv: str


class CorpusDocument(BaseModel):
    doc_id: str
    text: str


class CorpusBody(BaseModel):
    documents: list[CorpusDocument]


class TrainBody(BaseModel):
    seed: int
    params: ParamsPatch | None = None


class RefineBody(BaseModel):
    seed: int
    overrides: ParamsPatch | None = None


class FilterBody(BaseModel):
    csv: str
    rules: list[dict] | None = None
    tfidf_field: str = "tfidf_sum"


def params_to_json(p: GrowthParams) -> dict:
    return {
        "tau1": p.tau1, "tau2": p.tau2, "lam": p.lam, "alpha": p.alpha,
        "beta": p.beta, "max_depth": p.max_depth, "max_insertions": p.max_insertions,
    }


def hierarchy_summary(h: Hierarchy) -> dict:
    """Recursive node tree with path labels, sample counts, and hex colors."""
    basis = fit_pca(h.data)
    projections = [
        project(u.weight, basis)
        for n in h.nodes() if n.child_map is not None
        for u in n.child_map.units()
    ]
    ranges = channel_ranges(projections) if projections else []

    def render(node) -> dict:
        grid = node.child_map
        units = []
        for u in grid.units():
            child = node.children[(u.row, u.col)]
            units.append({
                "path": child.label(),
                "label": child.label(with_count=True),
                "row": u.row,
                "col": u.col,
                "samples": u.n,
                "qe": u.qe,
                "color": unit_color(u.weight, basis, ranges).to_hex(),
                "child": render(child) if child.child_map is not None else None,
            })
        return {
            "path": node.label(),
            "samples": len(node.sample_indices),
            "rows": grid.rows,
            "cols": grid.cols,
            "units": units,
        }

    return {
        "depth": h.depth(),
        "qe0": h.qe0,
        "params": params_to_json(h.params),
        "map": render(h.root),
    }


def session_instances(state: SessionState) -> list[LabeledInstance]:
    """Raw-attribute instances labeled with each sample's leaf path."""
    h = state.hierarchy
    labels = h.leaf_labels()
    data = h.data
    instances = []
    for i in range(len(data)):
        attrs = {name: float(data.raw[i][j]) for j, name in enumerate(data.schema)}
        instances.append(LabeledInstance(attributes=attrs, label=labels[i]))
    return instances


def derive_rules(state: SessionState):
    tree = induce(session_instances(state))
    return tree, extract_rules(tree)


def clone_hierarchy(h: Hierarchy) -> Hierarchy:
    """Bit-exact working copy sharing the (immutable) dataset."""
    clone = import_snapshot(export_snapshot(h), h.data)
    clone.audit = list(h.audit)
    return clone


def replay_audit(state: SessionState) -> Hierarchy | None:
    """Re-run the session's recorded train/refine events on its dataset."""
    h: Hierarchy | None = None
    for event in state.audit:
        if event["event"] == "train":
            h = grow(state.dataset, GrowthParams(**event["params"]), event["seed"])
        elif event["event"] == "refine":
            req = RefineRequest(
                target=event["target"],
                params=GrowthParams(**event["params"]),
                seed=event["seed"],
            )
            h, _ = refine(h, req)
    return h


def create_app() -> FastAPI:
    app = FastAPI(title="ghsom-workbench")
    sessions: dict[str, SessionState] = {}
    app.state.sessions = sessions

    def get_session(sid: str) -> SessionState:
        state = sessions.get(sid)
        if state is None:
            raise LookupError(f"no session {sid}")
        return state

    def require_hierarchy(state: SessionState) -> Hierarchy:
        if state.hierarchy is None:
            raise ContractError("no hierarchy: train first")
        return state.hierarchy

    @app.exception_handler(WorkbenchError)
    async def workbench_error(request: Request, exc: WorkbenchError):
        status = 422
        payload = {"error": type(exc).__name__, "detail": str(exc)}
        if isinstance(exc, CsvValidationError):
            payload["problems"] = [
                {"line": line, "message": message} for line, message in exc.problems
            ]
        elif isinstance(exc, PathNotFoundError):
            status = 404
        elif isinstance(exc, RefineConflictError):
            status = 409
        elif isinstance(exc, FingerprintMismatchError):
            status = 409
            payload["expected"] = exc.expected
            payload["actual"] = exc.actual
        elif isinstance(exc, ContractError):
            status = 409 if "no hierarchy" in str(exc) else 422
        return JSONResponse(status_code=status, content=payload)

    @app.exception_handler(LookupError)
    async def lookup_error(request: Request, exc: LookupError):
        return JSONResponse(status_code=404, content={"error": "NotFound", "detail": str(exc)})

    @app.post("/sessions")
    def create_session(body: CreateSessionBody | None = None):
        params = DEFAULT_PARAMS
        if body and body.params:
            params = body.params.apply(params)
        state = SessionState(params)
        sessions[state.id] = state
        return {"id": state.id, "params": params_to_json(params)}

    @app.post("/sessions/{sid}/data")
    def upload_data(sid: str, body: DataBody):
        state = get_session(sid)
        with state.writer():
            records = parse_records(body.csv)
            state.csv_text = body.csv
            state.records = records
            state.rebuild_features()
        return {
            "records": len(records),
            "features_built": state.dataset is not None,
        }

    @app.post("/sessions/{sid}/corpus")
    def upload_corpus(sid: str, body: CorpusBody):
        state = get_session(sid)
        with state.writer():
            state.corpus = build_corpus([(d.doc_id, d.text) for d in body.documents])
            state.rebuild_features()
        return {
            "documents": state.corpus.document_count,
            "features_built": state.dataset is not None,
        }

    @app.post("/sessions/{sid}/train")
    def train_session(sid: str, body: TrainBody):
        state = get_session(sid)
        with state.writer():
            if state.dataset is None:
                raise ContractError("no dataset: upload data (and corpus) first")
            params = body.params.apply(state.params) if body.params else state.params
            hierarchy = grow(state.dataset, params, body.seed)
            state.hierarchy = hierarchy
            state.audit.append({
                "event": "train",
                "seed": body.seed,
                "params": params_to_json(params),
            })
        return hierarchy_summary(hierarchy)

    @app.get("/sessions/{sid}/hierarchy")
    def get_hierarchy(sid: str):
        state = get_session(sid)
        return hierarchy_summary(require_hierarchy(state))

    @app.get("/sessions/{sid}/nodes/{path}/samples")
    def node_samples(sid: str, path: str):
        state = get_session(sid)
        h = require_hierarchy(state)
        node = resolve_path(h, path)
        samples = []
        for i in node.sample_indices:
            if state.records is not None:
                r = state.records[i]
                tmax, tsum = state.tfidf_pairs[i]
                samples.append({
                    "index": i, "id": r.id, "name": r.name,
                    "evaluation": r.evaluation, "comment": r.comment,
                    "tfidf_max": tmax, "tfidf_sum": tsum,
                })
            else:
                samples.append({"index": i})
        return {"path": node.label(), "count": len(samples), "samples": samples}

    @app.post("/sessions/{sid}/nodes/{path}/refine")
    def refine_node(sid: str, path: str, body: RefineBody):
        state = get_session(sid)
        with state.writer():
            h = require_hierarchy(state)
            params = body.overrides.apply(h.params) if body.overrides else h.params
            working = clone_hierarchy(h)
            target = resolve_path(working, path)  # 404 before any work
            scope_label = format_path(target.path[:-1] if target.path else ())
            refined, report = refine(
                working, RefineRequest(target=path, params=params, seed=body.seed)
            )
            state.hierarchy = refined  # atomic swap: readers see old or new
            state.audit.append({
                "event": "refine",
                "target": path,
                "seed": body.seed,
                "params": params_to_json(params),
            })
        return {
            "scope": scope_label,
            "report": {
                "scope_size": report.scope_size,
                "depth_before": report.depth_before,
                "depth_after": report.depth_after,
                "case1_stops": report.case1_stops,
                "case2_insertions": report.case2_insertions,
                "duration_ms": report.duration_ms,
            },
            "hierarchy": hierarchy_summary(refined),
        }

    @app.get("/sessions/{sid}/rules")
    def get_rules(sid: str):
        state = get_session(sid)
        require_hierarchy(state)
        tree, rules = derive_rules(state)
        state.audit.append({"event": "extract_rules"})
        return {
            "rules": rules_to_json(rules),
            "tree": tree_to_json(tree),
            "tree_text": render_text(tree),
        }

    @app.post("/sessions/{sid}/filter")
    def filter_records(sid: str, body: FilterBody):
        state = get_session(sid)
        if body.rules is not None:
            rules = parse_rules(body.rules)
        else:
            require_hierarchy(state)
            _, rules = derive_rules(state)
        if state.corpus is None:
            raise ContractError("no corpus: upload corpus first")
        records = parse_records(body.csv)
        cfg = TopLConfig()
        sink = ListSink()
        for r in records:
            tmax, tsum, _ = comment_features(r.comment, state.corpus, cfg)
            attrs = rule_attributes(r, tmax, tsum, tfidf_field=body.tfidf_field)
            area = evaluate(rules, attrs)
            if area is not None:
                emit(r, area, sink)
        return {
            "messages": [
                {"record_id": m.record_id, "area": m.area, "text": m.text}
                for m in sink.messages
            ]
        }

    @app.get("/sessions/{sid}/snapshot")
    def get_snapshot(sid: str):
        state = get_session(sid)
        snapshot = export_snapshot(require_hierarchy(state))
        return Response(content=snapshot_bytes(snapshot), media_type="application/json")

    @app.put("/sessions/{sid}/snapshot")
    async def put_snapshot(sid: str, request: Request):
        state = get_session(sid)
        snapshot = await request.json()
        with state.writer():
            if state.dataset is None:
                raise ContractError("no dataset: upload data (and corpus) first")
            state.hierarchy = import_snapshot(snapshot, state.dataset)
            state.audit.append({"event": "import_snapshot"})
        return {"nodes": len(snapshot["nodes"]), "depth": state.hierarchy.depth()}

    @app.get("/sessions/{sid}/audit")
    def get_audit(sid: str):
        state = get_session(sid)
        return {"events": state.audit}

    return app


app = create_app()

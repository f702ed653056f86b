"""HTTP/JSON API over the workbench: corpora, feature sets, rules, models.

The session store is in-memory (optionally snapshotted to a JSON file between
runs). Ids are monotone per resource type and never reused within a process;
resources referenced by a model cannot be deleted. Mutations serialize behind
a lock; reads see immutable values.
"""

from __future__ import annotations

import json
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import evalkit, modelio, ruledsl, textfeat
from .classifiers import (
    DimensionMismatchError,
    MalformedTreeError,
    ModelError,
    SingleClassCorpusError,
    TrainConfig,
    UnknownModelKindError,
    UnknownTreeFeatureError,
    ZeroFeaturesError,
)
from .corpus import (
    BadCsvError,
    BadLabelError,
    Corpus,
    CorpusError,
    EmptyCorpusError,
    EmptySubjectError,
    InvalidFractionError,
    MissingColumnError,
    class_balance,
    dump_csv,
    load_csv,
)
from .errors import SpamLabError
from .evalkit import EmptyInputError, EvalError, Evaluation, LengthMismatchError
from .modelio import BadModelFileError
from .ruledsl import RuleError, RuleSyntaxError, RulesetError, UnknownFeatureError
from .textfeat import (
    BadFeatureNameError,
    BadFeatureSpecError,
    BadRegexError,
    DuplicateFeatureNameError,
    FeatureError,
)


class ServiceError(SpamLabError):
    """API-level failure with an explicit status and machine code."""

    def __init__(self, status: int, code: str, message: str, **extra):
        self.status = status
        self.code = code
        self.extra = extra
        super().__init__(message)


# Library error -> (HTTP status, machine code). Order matters: first match on
# the exception MRO wins, so subclasses go before their bases.
_ERROR_MAP: list[tuple[type, tuple[int, str]]] = [
    (MissingColumnError, (400, "missing_column")),
    (BadLabelError, (400, "bad_label")),
    (EmptyCorpusError, (400, "empty_corpus")),
    (EmptySubjectError, (400, "empty_subject")),
    (BadCsvError, (400, "bad_csv")),
    (InvalidFractionError, (400, "invalid_fraction")),
    (CorpusError, (400, "bad_corpus")),
    (BadRegexError, (400, "bad_regex")),
    (BadFeatureNameError, (400, "bad_feature_name")),
    (DuplicateFeatureNameError, (400, "duplicate_feature_name")),
    (BadFeatureSpecError, (400, "bad_feature_spec")),
    (FeatureError, (400, "bad_feature")),
    (RuleSyntaxError, (400, "syntax_error")),
    (UnknownFeatureError, (400, "unknown_feature")),
    (RulesetError, (400, "bad_ruleset")),
    (RuleError, (400, "bad_rule")),
    (SingleClassCorpusError, (400, "single_class_corpus")),
    (ZeroFeaturesError, (400, "zero_features")),
    (DimensionMismatchError, (400, "dimension_mismatch")),
    (MalformedTreeError, (400, "malformed_tree")),
    (UnknownTreeFeatureError, (400, "unknown_feature")),
    (UnknownModelKindError, (400, "unknown_model_kind")),
    (BadModelFileError, (400, "bad_model_file")),
    (LengthMismatchError, (400, "length_mismatch")),
    (EmptyInputError, (400, "empty_input")),
    (EvalError, (400, "bad_evaluation")),
    (ModelError, (400, "bad_model")),
]


def _error_body(exc: SpamLabError) -> tuple[int, dict]:
    if isinstance(exc, ServiceError):
        body = {"code": exc.code, "message": str(exc)}
        if exc.extra:
            body.update(exc.extra)
            body["detail"] = exc.extra
        return exc.status, body
    for klass, (status, code) in _ERROR_MAP:
        if isinstance(exc, klass):
            body = {"code": code, "message": str(exc)}
            detail = {}
            for attr in ("position", "expected", "row", "line", "name", "value"):
                if hasattr(exc, attr):
                    detail[attr] = getattr(exc, attr)
            if detail:
                body.update(detail)
                body["detail"] = detail
            return status, body
    return 500, {"code": "internal", "message": str(exc)}


@dataclass
class StoredModel:
    bundle: modelio.TrainedModel
    feature_set_id: int
    train_corpus_id: int
    test_corpus_id: int
    train_eval: Evaluation
    test_eval: Evaluation


class SessionStore:
    def __init__(self):
        self.lock = threading.RLock()
        self.corpora: dict[int, Corpus] = {}
        self.feature_sets: dict[int, tuple[textfeat.FeatureDef, ...]] = {}
        self.models: dict[int, StoredModel] = {}
        self._next = {"corpus": 1, "feature_set": 1, "model": 1}

    def next_id(self, kind: str) -> int:
        value = self._next[kind]
        self._next[kind] = value + 1
        return value

    # ------------------------------------------------------- persistence

    def to_snapshot(self) -> dict:
        return {
            "next_ids": dict(self._next),
            "corpora": [
                {"id": cid, "name": c.name, "csv": dump_csv(c)}
                for cid, c in sorted(self.corpora.items())
            ],
            "feature_sets": [
                {"id": fid, "features": [textfeat.feature_to_dict(f) for f in defs]}
                for fid, defs in sorted(self.feature_sets.items())
            ],
            "models": [
                {
                    "id": mid,
                    "feature_set": sm.feature_set_id,
                    "train_corpus": sm.train_corpus_id,
                    "test_corpus": sm.test_corpus_id,
                    "bundle": modelio.model_to_dict(sm.bundle),
                    "train_confusion": evalkit.confusion_to_json(sm.train_eval.confusion),
                    "test_confusion": evalkit.confusion_to_json(sm.test_eval.confusion),
                }
                for mid, sm in sorted(self.models.items())
            ],
        }

    @classmethod
    def from_snapshot(cls, doc: dict) -> "SessionStore":
        store = cls()
        store._next.update(doc.get("next_ids", {}))
        for entry in doc.get("corpora", []):
            store.corpora[int(entry["id"])] = load_csv(entry["csv"], name=entry["name"])
        for entry in doc.get("feature_sets", []):
            defs = tuple(textfeat.feature_from_dict(d) for d in entry["features"])
            store.feature_sets[int(entry["id"])] = defs
        for entry in doc.get("models", []):
            def _eval(block) -> Evaluation:
                cm = evalkit.ConfusionMatrix(**block)
                return Evaluation(cm, evalkit.metrics(cm))

            store.models[int(entry["id"])] = StoredModel(
                bundle=modelio.model_from_dict(entry["bundle"]),
                feature_set_id=int(entry["feature_set"]),
                train_corpus_id=int(entry["train_corpus"]),
                test_corpus_id=int(entry["test_corpus"]),
                train_eval=_eval(entry["train_confusion"]),
                test_eval=_eval(entry["test_confusion"]),
            )
        return store


def _get_or_fail(mapping: dict, key: int, status: int, code: str):
    value = mapping.get(key)
    if value is None:
        raise ServiceError(status, code, f"no such resource: {key}")
    return value


def _train_config_from(body: dict) -> TrainConfig:
    def pick(name: str, default, cast):
        value = body.get(name, default)
        try:
            return cast(value) if value is not None else None
        except (TypeError, ValueError):
            raise ServiceError(400, "bad_hyperparameter", f"bad value for {name!r}: {value!r}")

    try:
        return TrainConfig(
            lambda_=pick("lambda", 1e-4, float),
            max_iter=pick("max_iter", 200, int),
            tol=pick("tol", 1e-8, float),
            alpha=pick("alpha", 1.0, float),
            max_depth=pick("max_depth", 5, int),
            min_leaf=pick("min_leaf", 2, int),
            impurity=pick("impurity", "gini", str),
            n_trees=pick("n_trees", 100, int),
            mtry=pick("mtry", None, int),
            bootstrap=bool(body.get("bootstrap", True)),
            seed=pick("seed", 0, int),
            threshold=pick("threshold", 0.5, float),
        )
    except ModelError as exc:
        raise ServiceError(400, "bad_hyperparameter", str(exc))


def create_app(data_dir: Optional[str] = None, webui_dir: Optional[str] = None) -> FastAPI:
    snapshot_path = Path(data_dir) / "store.json" if data_dir else None

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if snapshot_path and snapshot_path.exists():
            doc = json.loads(snapshot_path.read_text(encoding="utf-8"))
            app.state.store = SessionStore.from_snapshot(doc)
        yield
        if snapshot_path:
            snapshot_path.parent.mkdir(parents=True, exist_ok=True)
            snapshot_path.write_text(
                json.dumps(app.state.store.to_snapshot(), indent=2) + "\n", encoding="utf-8"
            )

    app = FastAPI(title="spamlab", version="0.1.0", lifespan=lifespan)
    app.state.store = SessionStore()
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(SpamLabError)
    async def _spamlab_error(request: Request, exc: SpamLabError):
        status, body = _error_body(exc)
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "bad_request", "message": "invalid request body or parameters"},
        )

    def store() -> SessionStore:
        return app.state.store

    # ------------------------------------------------------------ corpora

    @app.post("/corpora")
    async def create_corpus(request: Request):
        content_type = request.headers.get("content-type", "")
        name = "corpus"
        if content_type.startswith("multipart/"):
            form = await request.form()
            upload = form.get("file")
            if upload is None:
                raise ServiceError(400, "bad_request", "multipart body needs a 'file' part")
            raw = await upload.read()
            name = Path(getattr(upload, "filename", None) or "corpus").stem
            if isinstance(form.get("name"), str):
                name = form["name"]
        else:
            try:
                body = await request.json()
            except json.JSONDecodeError:
                raise ServiceError(400, "bad_request", "body must be JSON or multipart")
            if not isinstance(body, dict) or "csv" not in body:
                raise ServiceError(400, "bad_request", 'JSON body needs a "csv" field')
            raw = body["csv"].encode("utf-8") if isinstance(body["csv"], str) else bytes(body["csv"])
            name = body.get("name", name)
        loaded = load_csv(raw, name=name)
        st = store()
        with st.lock:
            cid = st.next_id("corpus")
            st.corpora[cid] = loaded
        return {"id": cid, "size": len(loaded), "class_balance": float(class_balance(loaded))}

    @app.get("/corpora")
    async def list_corpora():
        st = store()
        return [
            {"id": cid, "name": c.name, "size": len(c), "class_balance": float(class_balance(c))}
            for cid, c in sorted(st.corpora.items())
        ]

    @app.get("/corpora/{corpus_id}/vocabulary")
    async def corpus_vocabulary(corpus_id: int, min_freq: int = 4, mode: str = "document"):
        st = store()
        loaded = _get_or_fail(st.corpora, corpus_id, 404, "unknown_corpus")
        if min_freq < 1:
            raise ServiceError(400, "bad_min_freq", f"min_freq must be >= 1, got {min_freq}")
        if mode not in ("document", "occurrence"):
            raise ServiceError(400, "bad_request", "mode must be 'document' or 'occurrence'")
        vocab = textfeat.build_vocabulary(loaded, min_freq=min_freq, mode=mode)
        return [{"word": w, "count": c} for w, c in vocab.entries]

    @app.delete("/corpora/{corpus_id}")
    async def delete_corpus(corpus_id: int):
        st = store()
        with st.lock:
            _get_or_fail(st.corpora, corpus_id, 404, "unknown_corpus")
            used_by = [
                mid for mid, sm in st.models.items()
                if corpus_id in (sm.train_corpus_id, sm.test_corpus_id)
            ]
            if used_by:
                raise ServiceError(
                    409, "in_use", f"corpus {corpus_id} is referenced by models {sorted(used_by)}"
                )
            del st.corpora[corpus_id]
        return {"deleted": corpus_id}

    # ------------------------------------------------------- feature sets

    @app.post("/feature-sets")
    async def create_feature_set(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            raise ServiceError(400, "bad_request", "body must be JSON")
        if isinstance(body, list):
            raw_defs, expand_id, min_freq = body, None, 4
        elif isinstance(body, dict):
            raw_defs = body.get("features", [])
            expand_id = body.get("expand_bag_of_words")
            min_freq = body.get("min_freq", 4)
        else:
            raise ServiceError(400, "bad_request", "body must be a list or object")
        if not isinstance(raw_defs, list):
            raise ServiceError(400, "bad_request", '"features" must be a list')
        defs = [textfeat.feature_from_dict(d) for d in raw_defs]
        st = store()
        if expand_id is not None:
            loaded = _get_or_fail(st.corpora, int(expand_id), 400, "unknown_corpus")
            if not isinstance(min_freq, int) or min_freq < 1:
                raise ServiceError(400, "bad_min_freq", f"min_freq must be >= 1, got {min_freq}")
            vocab = textfeat.build_vocabulary(loaded, min_freq=min_freq)
            defs.extend(textfeat.bag_features(vocab))
        textfeat.check_unique_names(defs)
        with st.lock:
            fid = st.next_id("feature_set")
            st.feature_sets[fid] = tuple(defs)
        return {"id": fid, "feature_names": [d.name for d in defs]}

    @app.get("/feature-sets")
    async def list_feature_sets():
        st = store()
        return [
            {"id": fid, "feature_names": [d.name for d in defs]}
            for fid, defs in sorted(st.feature_sets.items())
        ]

    @app.get("/feature-sets/{set_id}")
    async def get_feature_set(set_id: int):
        st = store()
        defs = _get_or_fail(st.feature_sets, set_id, 404, "unknown_feature_set")
        return {"id": set_id, "features": [textfeat.feature_to_dict(d) for d in defs]}

    @app.delete("/feature-sets/{set_id}")
    async def delete_feature_set(set_id: int):
        st = store()
        with st.lock:
            _get_or_fail(st.feature_sets, set_id, 404, "unknown_feature_set")
            used_by = [mid for mid, sm in st.models.items() if sm.feature_set_id == set_id]
            if used_by:
                raise ServiceError(
                    409, "in_use", f"feature set {set_id} is referenced by models {sorted(used_by)}"
                )
            del st.feature_sets[set_id]
        return {"deleted": set_id}

    # -------------------------------------------------------------- rules

    @app.post("/rules/parse")
    async def rules_parse(body: dict):
        source = body.get("source")
        if not isinstance(source, str):
            raise ServiceError(400, "bad_request", 'body needs a string "source" field')
        expr = ruledsl.parse_rule(source)
        return {"ast": ruledsl.ast_to_dict(expr), "canonical": ruledsl.pretty_print(expr)}

    # ------------------------------------------------------------- models

    @app.post("/models")
    async def create_model(body: dict):
        kind = body.get("kind")
        if kind not in modelio.MODEL_KINDS:
            raise ServiceError(
                400, "unknown_model_kind",
                f"kind must be one of {', '.join(modelio.MODEL_KINDS)}; got {kind!r}",
            )
        st = store()
        for field in ("feature_set", "train_corpus", "test_corpus"):
            if field not in body:
                raise ServiceError(400, "bad_request", f'body needs a "{field}" id')
        defs = _get_or_fail(st.feature_sets, int(body["feature_set"]), 400, "unknown_feature_set")
        train_corpus = _get_or_fail(st.corpora, int(body["train_corpus"]), 400, "unknown_corpus")
        test_corpus = _get_or_fail(st.corpora, int(body["test_corpus"]), 400, "unknown_corpus")
        config = _train_config_from(body)

        bundle = modelio.train_model(
            kind,
            train_corpus,
            defs,
            config,
            rules_source=body.get("rules"),
            tree_description=body.get("tree"),
        )
        train_eval = evalkit.evaluate_on(bundle, train_corpus)
        test_eval = evalkit.evaluate_on(bundle, test_corpus)
        with st.lock:
            mid = st.next_id("model")
            st.models[mid] = StoredModel(
                bundle=bundle,
                feature_set_id=int(body["feature_set"]),
                train_corpus_id=int(body["train_corpus"]),
                test_corpus_id=int(body["test_corpus"]),
                train_eval=train_eval,
                test_eval=test_eval,
            )
        return {
            "id": mid,
            "kind": kind,
            "feature_names": [d.name for d in defs],
            "train_metrics": evalkit.metrics_to_json(train_eval),
            "test_metrics": evalkit.metrics_to_json(test_eval),
            "payload": modelio.model_to_dict(bundle)["payload"],
        }

    @app.get("/models")
    async def list_models():
        st = store()
        return [
            {
                "id": mid,
                "kind": sm.bundle.kind,
                "feature_set": sm.feature_set_id,
                "train_corpus": sm.train_corpus_id,
                "test_corpus": sm.test_corpus_id,
            }
            for mid, sm in sorted(st.models.items())
        ]

    @app.get("/models/{model_id}/metrics")
    async def model_metrics(model_id: int):
        st = store()
        sm = _get_or_fail(st.models, model_id, 404, "unknown_model")
        return {
            "id": model_id,
            "kind": sm.bundle.kind,
            "train": evalkit.metrics_to_json(sm.train_eval),
            "test": evalkit.metrics_to_json(sm.test_eval),
        }

    @app.post("/models/{model_id}/predict")
    async def model_predict(model_id: int, body: dict):
        st = store()
        sm = _get_or_fail(st.models, model_id, 404, "unknown_model")
        subject = body.get("subject")
        if not isinstance(subject, str) or not subject.strip():
            raise ServiceError(400, "empty_subject", "subject must be a non-empty string")
        label, score, vector = sm.bundle.predict_subject(subject)
        return {
            "label": label.value,
            "score": score,
            "feature_vector": dict(zip(vector.feature_names, vector.values)),
        }

    @app.delete("/models/{model_id}")
    async def delete_model(model_id: int):
        st = store()
        with st.lock:
            _get_or_fail(st.models, model_id, 404, "unknown_model")
            del st.models[model_id]
        return {"deleted": model_id}

    # -------------------------------------------------------------- misc

    @app.get("/healthz", response_class=PlainTextResponse)
    async def healthz():
        return "ok"

    @app.get("/api-spec")
    async def api_spec():
        return JSONResponse(app.openapi())

    if webui_dir and Path(webui_dir).is_dir():
        app.mount("/", StaticFiles(directory=webui_dir, html=True), name="webui")
    else:
        @app.get("/")
        async def index():
            return {
                "service": "spamlab",
                "endpoints": [
                    "POST /corpora",
                    "GET /corpora",
                    "GET /corpora/{id}/vocabulary",
                    "POST /feature-sets",
                    "POST /rules/parse",
                    "POST /models",
                    "POST /models/{id}/predict",
                    "GET /models/{id}/metrics",
                    "GET /healthz",
                    "GET /api-spec",
                ],
            }

    return app

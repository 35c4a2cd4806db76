"""HTTP service for interactive scatter/gather browsing.

A session clusters a corpus (scatter), the user picks clusters to keep
(gather), and the pipeline re-runs from vocabulary construction onward on the
reduced set, so term statistics track the increasingly homogeneous subset.
History is a stack: back restores the exact prior state. Sessions live in
memory and snapshot to JSON on every mutation, so a restarted service picks
them back up.
"""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .corpus import Corpus, load_corpus, read_truth_csv
from .cluster import KmeansParams
from .descriptors import cluster_descriptors, plot_projection
from .errors import ScatterMeshError, StageError
from .harness import PipelineConfig, run_pipeline, score_clustering
from .vectorizer import load_stopwords, tokenize

DESCRIPTORS_PER_CLUSTER = 10
SAMPLES_PER_CLUSTER = 5


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass(frozen=True)
class CorpusEntry:
    corpus_id: str
    path: Path
    corpus: Corpus
    truth: dict[str, str] | None


@dataclass
class Session:
    session_id: str
    corpus_id: str
    config: PipelineConfig
    state: dict  # current scatter, JSON-serializable
    history: list[dict] = field(default_factory=list)
    next_generation: int = 2
    scatters_done: int = 1
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def _corpus_id_for(path: Path) -> str:
    return hashlib.sha1(str(path.resolve()).encode("utf-8")).hexdigest()[:12]


def _truth_sidecar(path: Path) -> dict[str, str] | None:
    sidecar = path.with_suffix(".truth.csv")
    if sidecar.is_file():
        return read_truth_csv(sidecar)
    return None


class ScatterGatherService:
    """Owns corpora, sessions, snapshots, and the scatter computation."""

    def __init__(self, corpus_dir: str | Path, state_dir: str | Path | None = None):
        self.corpus_dir = Path(corpus_dir)
        self.state_dir = Path(state_dir) if state_dir else self.corpus_dir / ".sessions"
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.corpora: dict[str, CorpusEntry] = {}
        self.sessions: dict[str, Session] = {}
        self.stopwords = load_stopwords()
        self._registry_lock = threading.Lock()
        self._restore_sessions()

    # -- corpora ---------------------------------------------------------

    def register_corpus(self, path_str: str) -> CorpusEntry:
        path = Path(path_str)
        if not path.is_absolute():
            path = self.corpus_dir / path
        if not path.is_file():
            raise ServiceError(404, f"corpus file not found: {path}")
        corpus_id = _corpus_id_for(path)
        with self._registry_lock:
            entry = self.corpora.get(corpus_id)
            if entry is None:
                try:
                    corpus = load_corpus(path)
                except ScatterMeshError as exc:
                    raise ServiceError(400, str(exc)) from exc
                entry = CorpusEntry(
                    corpus_id=corpus_id,
                    path=path,
                    corpus=corpus,
                    truth=_truth_sidecar(path),
                )
                self.corpora[corpus_id] = entry
        return entry

    def _corpus(self, corpus_id: str) -> CorpusEntry:
        entry = self.corpora.get(corpus_id)
        if entry is None:
            raise ServiceError(404, f"unknown corpus {corpus_id!r}")
        return entry

    # -- scatter computation ---------------------------------------------

    def _scatter(
        self,
        entry: CorpusEntry,
        config: PipelineConfig,
        active_ids: tuple[str, ...],
        seed: int,
        generation: int,
        k_override: int | None = None,
    ) -> dict:
        subcorpus = entry.corpus.subset(active_ids)
        if len(subcorpus) == 0:
            raise ServiceError(400, "active set is empty")
        if len(subcorpus) == 1:
            return self._single_document_state(subcorpus, generation, seed)

        effective = replace(config, seed=seed)
        if isinstance(config.algorithm, KmeansParams):
            k = k_override if k_override is not None else config.algorithm.k
            k = max(1, min(k, len(subcorpus)))
            effective = replace(effective, algorithm=replace(config.algorithm, k=k))
        elif k_override is not None:
            raise ServiceError(400, "k override applies only to k-means sessions")

        try:
            artifacts = run_pipeline(subcorpus, effective, stopwords=self.stopwords, clamp_lsa=True)
        except StageError as exc:
            raise ServiceError(422, f"re-clustering failed at {exc.stage}: {exc.cause}") from exc

        clustering = artifacts.clustering
        descriptor_lists = cluster_descriptors(
            clustering,
            artifacts.restricted.vocab,
            top_k=DESCRIPTORS_PER_CLUSTER,
            factors=artifacts.factors,
        )

        metrics = None
        truth = entry.truth
        if truth is not None and all(doc_id in truth for doc_id in subcorpus.ids):
            classes = tuple(sorted({truth[doc_id] for doc_id in subcorpus.ids}))
            report, _ = score_clustering(
                artifacts.space,
                clustering,
                {doc_id: truth[doc_id] for doc_id in subcorpus.ids},
                subcorpus.ids,
                classes,
                ami_normalizer=config.ami_normalizer,
                silhouette_variant=config.silhouette_variant,
            )
            metrics = json.loads(report.to_json())

        projection = [
            {"id": row.id, "x": row.x, "y": row.y, "cluster": row.cluster}
            for row in plot_projection(artifacts.restricted, clustering, seed=seed)
        ]

        clusters = []
        by_id = {rec.id: rec for rec in subcorpus}
        for c in range(clustering.k):
            member_ids = [subcorpus.ids[i] for i in clustering.members(c)]
            samples = [
                {"id": doc_id, "title": by_id[doc_id].title}
                for doc_id in member_ids[:SAMPLES_PER_CLUSTER]
            ]
            clusters.append(
                {
                    "id": f"g{generation}:c{c}",
                    "size": len(member_ids),
                    "descriptors": [
                        {"term": term, "weight": weight}
                        for term, weight in descriptor_lists[c].terms
                    ],
                    "samples": samples,
                    "member_ids": member_ids,
                }
            )

        return {
            "generation": generation,
            "seed_used": seed,
            "clusters": clusters,
            "metrics": metrics,
            "projection": projection,
        }

    def _single_document_state(self, subcorpus: Corpus, generation: int, seed: int) -> dict:
        rec = subcorpus.records[0]
        text = "\n".join(p for p in (rec.title, rec.abstract, rec.body) if p)
        counts = Counter(tokenize(text, self.stopwords))
        top = counts.most_common(DESCRIPTORS_PER_CLUSTER)
        return {
            "generation": generation,
            "seed_used": seed,
            "clusters": [
                {
                    "id": f"g{generation}:c0",
                    "size": 1,
                    "descriptors": [{"term": t, "weight": float(n)} for t, n in top],
                    "samples": [{"id": rec.id, "title": rec.title}],
                    "member_ids": [rec.id],
                }
            ],
            "metrics": None,
            "projection": [],
        }

    # -- sessions ----------------------------------------------------------

    def create_session(self, corpus_id: str, config_obj: dict | None) -> Session:
        entry = self._corpus(corpus_id)
        try:
            config = PipelineConfig.from_json_dict(config_obj or {})
        except (ValueError, KeyError, TypeError) as exc:
            raise ServiceError(400, f"bad config: {exc}") from exc

        state = self._scatter(
            entry, config, entry.corpus.ids, seed=config.seed, generation=1
        )
        session = Session(
            session_id=uuid.uuid4().hex[:12],
            corpus_id=corpus_id,
            config=config,
            state=state,
        )
        with self._registry_lock:
            self.sessions[session.session_id] = session
        self._snapshot(session)
        return session

    def _session(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise ServiceError(404, f"unknown session {session_id!r}")
        return session

    def gather(self, session_id: str, cluster_ids: list[str], k_override: int | None) -> Session:
        session = self._session(session_id)
        if not cluster_ids:
            raise ServiceError(400, "select at least one cluster to gather")
        with session.lock:
            current = session.state
            by_id = {c["id"]: c for c in current["clusters"]}
            generation = current["generation"]
            member_ids: list[str] = []
            seen: set[str] = set()
            for cid in cluster_ids:
                cluster = by_id.get(cid)
                if cluster is None:
                    raise ServiceError(
                        409,
                        f"cluster {cid!r} is not part of generation {generation}",
                    )
                for doc_id in cluster["member_ids"]:
                    if doc_id not in seen:
                        seen.add(doc_id)
                        member_ids.append(doc_id)

            entry = self._corpus(session.corpus_id)
            seed = session.config.seed + session.scatters_done  # advance per scatter
            new_state = self._scatter(
                entry,
                session.config,
                tuple(member_ids),
                seed=seed,
                generation=session.next_generation,
                k_override=k_override,
            )
            session.history.append(current)
            session.state = new_state
            session.next_generation += 1
            session.scatters_done += 1
            self._snapshot(session)
        return session

    def back(self, session_id: str) -> Session:
        session = self._session(session_id)
        with session.lock:
            if not session.history:
                raise ServiceError(400, "history is empty; nothing to go back to")
            session.state = session.history.pop()
            self._snapshot(session)
        return session

    def get_document(self, session_id: str, doc_id: str) -> dict:
        session = self._session(session_id)
        entry = self._corpus(session.corpus_id)
        try:
            rec = entry.corpus.get(doc_id)
        except KeyError:
            raise ServiceError(404, f"unknown document {doc_id!r}") from None
        cluster = None
        for c in session.state["clusters"]:
            if doc_id in c["member_ids"]:
                cluster = c["id"]
                break
        return {
            "id": rec.id,
            "title": rec.title,
            "abstract": rec.abstract,
            "body": rec.body,
            "class": entry.truth.get(doc_id) if entry.truth else None,
            "cluster": cluster,
        }

    # -- wire format -------------------------------------------------------

    def session_payload(self, session: Session) -> dict:
        with session.lock:  # reads see a consistent snapshot, never a torn mix
            state = session.state
            depth = len(session.history)
        return {
            "session_id": session.session_id,
            "generation": state["generation"],
            "clusters": [
                {
                    "id": c["id"],
                    "size": c["size"],
                    "descriptors": c["descriptors"],
                    "samples": c["samples"],
                }
                for c in state["clusters"]
            ],
            "metrics": state["metrics"],
            "history_depth": depth,
            "projection": state["projection"],
        }

    # -- persistence -------------------------------------------------------

    def _snapshot(self, session: Session) -> None:
        entry = self._corpus(session.corpus_id)
        payload = {
            "session_id": session.session_id,
            "corpus_id": session.corpus_id,
            "corpus_path": str(entry.path),
            "config": session.config.to_json_dict(),
            "state": session.state,
            "history": session.history,
            "next_generation": session.next_generation,
            "scatters_done": session.scatters_done,
        }
        path = self.state_dir / f"{session.session_id}.json"
        path.write_text(json.dumps(payload), encoding="utf-8")

    def _restore_sessions(self) -> None:
        for path in sorted(self.state_dir.glob("*.json")):
            try:
                payload = json.loads(path.read_text(encoding="utf-8"))
                self.register_corpus(payload["corpus_path"])
                session = Session(
                    session_id=payload["session_id"],
                    corpus_id=payload["corpus_id"],
                    config=PipelineConfig.from_json_dict(payload["config"]),
                    state=payload["state"],
                    history=payload["history"],
                    next_generation=payload["next_generation"],
                    scatters_done=payload["scatters_done"],
                )
                self.sessions[session.session_id] = session
            except (OSError, KeyError, ValueError, ServiceError):
                continue  # unreadable snapshot; skip rather than refuse to start


def create_app(
    corpus_dir: str | Path,
    state_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    service = ScatterGatherService(corpus_dir, state_dir=state_dir)
    app = FastAPI(title="scattermesh", docs_url=None, redoc_url=None)
    app.state.service = service

    @app.exception_handler(ServiceError)
    async def _service_error(_: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.exception_handler(Exception)
    async def _internal_error(_: Request, exc: Exception):
        return JSONResponse(status_code=500, content={"error": str(exc)})

    @app.post("/api/corpora")
    def post_corpora(body: dict):
        path = body.get("path")
        if not path:
            raise ServiceError(400, "body must contain 'path'")
        entry = service.register_corpus(path)
        return {"corpus_id": entry.corpus_id}

    @app.post("/api/sessions")
    def post_sessions(body: dict):
        corpus_id = body.get("corpus_id")
        if not corpus_id:
            raise ServiceError(400, "body must contain 'corpus_id'")
        session = service.create_session(corpus_id, body.get("config"))
        return service.session_payload(session)

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        return service.session_payload(service._session(session_id))

    @app.post("/api/sessions/{session_id}/gather")
    def post_gather(session_id: str, body: dict):
        clusters = body.get("clusters")
        if not isinstance(clusters, list) or not clusters:
            raise ServiceError(400, "body must contain a non-empty 'clusters' list")
        k = body.get("k")
        session = service.gather(session_id, [str(c) for c in clusters], k)
        return service.session_payload(session)

    @app.post("/api/sessions/{session_id}/back")
    def post_back(session_id: str):
        return service.session_payload(service.back(session_id))

    @app.get("/api/sessions/{session_id}/documents/{doc_id}")
    def get_document(session_id: str, doc_id: str):
        return service.get_document(session_id, doc_id)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app

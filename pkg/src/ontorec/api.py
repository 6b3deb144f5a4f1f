"""Resource-oriented JSON API over a store directory.

Mutations (ingest, feedback, profile creation, domain swap) are serialized
behind one writer lock; reads serve the latest committed in-memory snapshot.
Errors come back as {"code": ..., "message": ...} with a matching status.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import extract, kbase, profile as profile_mod, recommend
from .kbase import Layer
from .profile import EXPLICIT, IMPLICIT, FeedbackEvent, ProfileError
from .store import DuplicateArticle, Store, StoreError, UnknownArticle, UnknownUser


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(store: Store) -> FastAPI:
    app = FastAPI(title="ontorec")
    lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return _error(exc.status, exc.code, exc.message)

    @app.post("/articles", status_code=201)
    def post_article(body: dict):
        try:
            doc = extract.document_from_json(body)
        except KeyError as exc:
            raise ApiError(400, "SchemaError", f"missing field {exc}")
        with lock:
            try:
                report = store.ingest(doc)
            except DuplicateArticle:
                raise ApiError(409, "DuplicateArticle", f"article already ingested: {doc.id}")
        return report.to_json()

    @app.get("/articles/{doc_id}")
    def get_article(doc_id: str):
        doc = store.articles.get(doc_id)
        if doc is None:
            raise ApiError(404, "UnknownArticle", f"no such article: {doc_id}")
        return extract.document_to_json(doc)

    @app.get("/articles/{doc_id}/annotations")
    def get_annotations(doc_id: str):
        if doc_id not in store.articles:
            raise ApiError(404, "UnknownArticle", f"no such article: {doc_id}")
        return [extract.annotation_to_json(a) for a in store.annotations.get(doc_id, ())]

    @app.post("/users/{user_id}/profile", status_code=201)
    def create_profile(user_id: str, body: dict):
        seeds = body.get("seeds", [])
        with lock:
            try:
                p = store.create_profile(user_id, seeds)
            except ProfileError as exc:
                raise ApiError(400, type(exc).__name__, str(exc))
        return profile_mod.profile_to_json(p)

    @app.get("/users/{user_id}/profile")
    def get_profile(user_id: str):
        try:
            p = store.get_profile(user_id)
        except UnknownUser:
            raise ApiError(404, "UnknownUser", f"no such user: {user_id}")
        doc = profile_mod.profile_to_json(p)
        doc["labels"] = {
            cid: store.kb.concepts[cid].label for cid in p.vector if cid in store.kb.concepts
        }
        return doc

    @app.post("/users/{user_id}/feedback", status_code=201)
    def post_feedback(user_id: str, body: dict):
        kind = body.get("kind")
        if kind not in (EXPLICIT, IMPLICIT):
            raise ApiError(400, "UnknownSignalKind", f"unknown feedback kind: {kind!r}")
        event = FeedbackEvent(
            user_id=user_id,
            article_id=body.get("articleId", ""),
            kind=kind,
            rating=body.get("rating"),
            signal=body.get("signal"),
            timestamp=body.get("timestamp", ""),
        )
        with lock:
            try:
                p = store.record_feedback(event)
            except UnknownUser:
                raise ApiError(404, "UnknownUser", f"no such user: {user_id}")
            except UnknownArticle:
                raise ApiError(404, "UnknownArticle", f"article not indexed: {event.article_id}")
            except ProfileError as exc:
                raise ApiError(400, type(exc).__name__, str(exc))
        return profile_mod.profile_to_json(p)

    @app.get("/users/{user_id}/review")
    def get_review(user_id: str, date: str):
        try:
            review = store.review(user_id, date)
        except UnknownUser:
            raise ApiError(404, "UnknownUser", f"no such user: {user_id}")
        titles = {d.id: d.title for d in store.articles.values()}
        return recommend.review_to_json(review, titles)

    @app.get("/users/{user_id}/alerts")
    def get_alerts(user_id: str):
        try:
            alerts = store.user_alerts(user_id)
        except UnknownUser:
            raise ApiError(404, "UnknownUser", f"no such user: {user_id}")
        return [recommend.alert_to_json(a) for a in alerts]

    @app.get("/concepts/{concept_id}/digest")
    def get_digest(concept_id: str):
        if concept_id not in store.kb.concepts:
            raise ApiError(404, "UnknownId", f"no such concept: {concept_id}")
        d = store.digest(concept_id)
        return {
            "concept": d.concept,
            "individuals": list(d.individuals),
            "assertions": [
                {
                    "subject": a.subject,
                    "property": a.property,
                    "object": kbase.object_to_json(a.object),
                }
                for a in d.assertions
            ],
            "supportingArticles": sorted(d.supporting_articles),
        }

    @app.get("/ontology/{layer}")
    def get_layer(layer: str):
        try:
            layer_id = Layer(layer)
        except ValueError:
            raise ApiError(404, "UnknownLayer", f"no such layer: {layer}")
        return kbase.layer_to_doc(store.kb, layer_id)

    @app.post("/ontology/domain")
    def swap_domain(body: dict):
        try:
            staged = kbase.load_layer_doc(
                kbase.KnowledgeBase(
                    concepts={
                        cid: c
                        for cid, c in store.kb.concepts.items()
                        if c.layer is Layer.UPPER
                    }
                ),
                {**body, "layer": "domain"},
            )
        except kbase.KbError as exc:
            raise ApiError(400, "InvalidDomainLayer", str(exc))
        new_domain = kbase.DomainLayer(
            concepts=tuple(c for c in staged.concepts.values() if c.layer is Layer.DOMAIN),
            properties=tuple(staged.properties.values()),
            individuals=tuple(staged.individuals.values()),
        )
        with lock:
            try:
                report = store.swap_domain(new_domain)
            except kbase.InvalidDomainLayer as exc:
                raise ApiError(400, "InvalidDomainLayer", str(exc))
        return {
            "lexicalEntries": list(report.lexical_entries),
            "annotationRefs": list(report.annotation_refs),
            "assertions": [
                {
                    "subject": a.subject,
                    "property": a.property,
                    "object": kbase.object_to_json(a.object),
                }
                for a in report.assertions
            ],
        }

    return app

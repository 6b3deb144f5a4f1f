"""File-backed store tying the pipeline together: ontology layers, lexicon,
pattern rules, articles, annotations, the corpus index, user profiles and the
alert log — all plain JSON under one root directory.

Writes are atomic per file (write to a temp file, then rename). Ingest writes
the article file last as its commit marker; on load, index/annotation entries
referencing a missing article are rolled back, so a crash mid-ingest leaves
the article either fully present or fully absent.
"""

from __future__ import annotations

import dataclasses
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import extract, index as index_mod, kbase, profile as profile_mod, recommend
from .config import Config, config_to_json, load_config
from .extract import Annotation, Document, LexicalEntry, PatternRule
from .index import CorpusIndex
from .kbase import DanglingReport, DomainLayer, KnowledgeBase, Layer
from .profile import FeedbackEvent, Profile
from .recommend import Alert, Review

ARTICLE_CONCEPT = "corpus:Article"


class StoreError(Exception):
    pass


class DuplicateArticle(StoreError):
    pass


class UnknownArticle(StoreError):
    pass


class UnknownUser(StoreError):
    pass


class SchemaError(StoreError):
    pass


@dataclass
class IngestReport:
    article_id: str
    annotations: int
    new_individuals: List[str]
    index_n: int
    alerts: int

    def to_json(self) -> dict:
        return {
            "articleId": self.article_id,
            "annotations": self.annotations,
            "newIndividuals": list(self.new_individuals),
            "indexN": self.index_n,
            "alerts": self.alerts,
        }


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, str(path))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=1)


class Store:
    """In-memory view of the store directory plus persistence."""

    def __init__(self, root: Path, config: Config):
        self.root = Path(root)
        self.config = config
        self.kb: KnowledgeBase = KnowledgeBase()
        self.lexicon: List[LexicalEntry] = []
        self.rules: List[PatternRule] = []
        self.index: CorpusIndex = CorpusIndex()
        self.articles: Dict[str, Document] = {}
        self.annotations: Dict[str, List[Annotation]] = {}
        self.profiles: Dict[str, Profile] = {}
        self.alerts: List[Alert] = []
        self._trie = None

    # -- paths --------------------------------------------------------------

    def _layer_path(self, layer: Layer) -> Path:
        return self.root / "ontology" / f"{layer.value}.json"

    def _article_path(self, doc_id: str) -> Path:
        return self.root / "articles" / f"{doc_id}.json"

    def _annotation_path(self, doc_id: str) -> Path:
        return self.root / "annotations" / f"{doc_id}.jsonl"

    def _profile_path(self, user_id: str) -> Path:
        return self.root / "profiles" / f"{user_id}.json"

    # -- creation / loading -------------------------------------------------

    @classmethod
    def create(
        cls,
        root,
        kb: KnowledgeBase,
        lexicon: Sequence[LexicalEntry] = (),
        rules: Sequence[PatternRule] = (),
        config: Config = None,
    ) -> "Store":
        store = cls(Path(root), config or Config())
        store.kb = kb
        store.lexicon = list(lexicon)
        store.rules = list(rules)
        for d in ("ontology", "articles", "annotations", "profiles"):
            (store.root / d).mkdir(parents=True, exist_ok=True)
        store._write_ontology()
        store._write_lexicon()
        atomic_write(store.root / "rules.json", _dump(extract.rules_to_json(store.rules)))
        store._write_index()
        atomic_write(store.root / "config.json", _dump(config_to_json(store.config)))
        (store.root / "alerts.log").touch()
        return store

    @classmethod
    def load(cls, root) -> "Store":
        root = Path(root)
        config = load_config(root / "config.json")
        store = cls(root, config)
        kb = KnowledgeBase()
        docs = []
        for layer in (Layer.UPPER, Layer.DOMAIN, Layer.LEXICAL, Layer.CORPUS):
            path = store._layer_path(layer)
            if path.exists():
                doc = json.loads(path.read_text(encoding="utf-8"))
                docs.append(doc)
                kb = kbase.load_layer_doc(kb, doc, include_assertions=False)
        for doc in docs:
            kb = kbase.load_layer_assertions(kb, doc)
        store.kb = kb
        lex_path = root / "lexicon.json"
        if lex_path.exists():
            store.lexicon = extract.lexicon_from_json(
                json.loads(lex_path.read_text(encoding="utf-8"))
            )
        rules_path = root / "rules.json"
        if rules_path.exists():
            store.rules = extract.rules_from_json(
                json.loads(rules_path.read_text(encoding="utf-8"))
            )
        idx_path = root / "index.json"
        if idx_path.exists():
            store.index = index_mod.index_from_json(idx_path.read_text(encoding="utf-8"))
        for path in sorted((root / "articles").glob("*.json")):
            doc = extract.document_from_json(json.loads(path.read_text(encoding="utf-8")))
            store.articles[doc.id] = doc
        for path in sorted((root / "annotations").glob("*.jsonl")):
            anns = [
                extract.annotation_from_json(json.loads(line))
                for line in path.read_text(encoding="utf-8").splitlines()
                if line.strip()
            ]
            if anns:
                store.annotations[anns[0].doc_id] = anns
            else:
                store.annotations[path.stem] = []
        for path in sorted((root / "profiles").glob("*.json")):
            p = profile_mod.profile_from_json(json.loads(path.read_text(encoding="utf-8")))
            store.profiles[p.user_id] = p
        alerts_path = root / "alerts.log"
        if alerts_path.exists():
            for line in alerts_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    d = json.loads(line)
                    store.alerts.append(
                        Alert(
                            user_id=d["userId"],
                            individual_id=d["individualId"],
                            concept=d["concept"],
                            triggering_article_id=d["triggeringArticleId"],
                            date=d["date"],
                        )
                    )
        store._recover_orphans()
        return store

    def _recover_orphans(self) -> None:
        """Roll back traces of ingests that never committed their article file."""
        known = set(self.articles)
        orphan_docs = [d for d in self.index.vectors if d not in known]
        for doc_id in orphan_docs:
            vec = self.index.vectors.pop(doc_id)
            self.index.n_docs -= 1
            for term in vec:
                self.index.inverted[term].discard(doc_id)
                self.index.df[term] -= 1
                if self.index.df[term] <= 0:
                    del self.index.df[term]
                    del self.index.inverted[term]
        for doc_id in [d for d in self.annotations if d not in known]:
            del self.annotations[doc_id]
            path = self._annotation_path(doc_id)
            if path.exists():
                path.unlink()
        if orphan_docs:
            self._write_index()

    # -- persistence helpers ------------------------------------------------

    def _write_ontology(self) -> None:
        for layer in (Layer.UPPER, Layer.DOMAIN, Layer.LEXICAL, Layer.CORPUS):
            atomic_write(self._layer_path(layer), kbase.layer_to_json(self.kb, layer))
        if self.kb.quarantined:
            doc = sorted(
                (
                    {
                        "subject": a.subject,
                        "property": a.property,
                        "object": kbase.object_to_json(a.object),
                    }
                    for a in self.kb.quarantined
                ),
                key=lambda d: json.dumps(d, sort_keys=True),
            )
            atomic_write(self.root / "ontology" / "quarantine.json", _dump(doc))

    def _write_lexicon(self) -> None:
        atomic_write(self.root / "lexicon.json", _dump(extract.lexicon_to_json(self.lexicon)))

    def _write_index(self) -> None:
        atomic_write(self.root / "index.json", index_mod.index_to_json(self.index))

    def _write_annotations(self, doc_id: str) -> None:
        lines = [
            json.dumps(extract.annotation_to_json(a), ensure_ascii=False)
            for a in self.annotations.get(doc_id, ())
        ]
        atomic_write(self._annotation_path(doc_id), "\n".join(lines) + ("\n" if lines else ""))

    def _write_profile(self, user_id: str) -> None:
        atomic_write(
            self._profile_path(user_id), _dump(profile_mod.profile_to_json(self.profiles[user_id]))
        )

    def _append_alerts(self, alerts: Sequence[Alert]) -> None:
        if not alerts:
            return
        with open(self.root / "alerts.log", "a", encoding="utf-8") as fh:
            for a in alerts:
                fh.write(json.dumps(recommend.alert_to_json(a), ensure_ascii=False) + "\n")

    # -- pipeline -----------------------------------------------------------

    def vector_annotations(self, doc_id: str) -> List[Annotation]:
        """Annotations that feed the concept vector (temporal ones are article
        metadata, not vector dimensions)."""
        return [a for a in self.annotations.get(doc_id, ()) if a.normalized_value is None]

    def ingest(self, doc: Document, _fail_before_commit: bool = False) -> IngestReport:
        if doc.id in self.articles or doc.id in self.index.vectors:
            raise DuplicateArticle(doc.id)
        if self._trie is None:
            self._trie = extract.build_lexicon_trie(self.lexicon)
        anns = extract.annotate(doc, self.kb, self.lexicon, self.rules, trie=self._trie)
        result = extract.populate(self.kb, anns)
        kb = result.kb
        anns = result.annotations
        if ARTICLE_CONCEPT in kb.concepts:
            kb = kbase.add_individual(
                kb,
                kbase.Individual(
                    id=f"corpus:{doc.id}",
                    label=doc.title,
                    layer=Layer.CORPUS,
                    types=(ARTICLE_CONCEPT,),
                ),
            )
        counts = index_mod.raw_counts(
            [a for a in anns if a.normalized_value is None], kb, self.config.gamma
        )
        vector = index_mod.tfidf_for_new_doc(self.index, counts)

        alerted = {(a.user_id, a.individual_id) for a in self.alerts}
        new_alerts = []
        for p in self.profiles.values():
            new_alerts.extend(
                recommend.detect_alerts(
                    kb,
                    result.new_individuals,
                    p,
                    self.config.tau,
                    triggering_article={iid: doc.id for iid in result.new_individuals},
                    date=doc.published_date,
                    already_alerted=alerted,
                )
            )

        # Commit in-memory state, then files; the article file goes last so a
        # crash anywhere earlier is rolled back on the next load.
        self.kb = kb
        self.annotations[doc.id] = anns
        index_mod.index_article(self.index, doc.id, vector)
        if result.new_entries:
            self.lexicon.extend(result.new_entries)
            self._trie = None
        self.alerts.extend(new_alerts)

        self._write_ontology()
        self._write_lexicon()
        self._write_annotations(doc.id)
        self._write_index()
        self._append_alerts(new_alerts)
        if _fail_before_commit:
            raise RuntimeError("simulated crash before article commit")
        atomic_write(self._article_path(doc.id), _dump(extract.document_to_json(doc)))
        self.articles[doc.id] = doc
        return IngestReport(
            article_id=doc.id,
            annotations=len(anns),
            new_individuals=list(result.new_individuals),
            index_n=self.index.n_docs,
            alerts=len(new_alerts),
        )

    # -- users / feedback ---------------------------------------------------

    def create_profile(self, user_id: str, seeds) -> Profile:
        p = profile_mod.init_profile(user_id, seeds, self.kb)
        self.profiles[user_id] = p
        self._write_profile(user_id)
        return p

    def get_profile(self, user_id: str) -> Profile:
        p = self.profiles.get(user_id)
        if p is None:
            raise UnknownUser(user_id)
        return p

    def record_feedback(self, event: FeedbackEvent) -> Profile:
        p = self.get_profile(event.user_id)
        vec = self.index.vectors.get(event.article_id)
        if vec is None:
            raise UnknownArticle(event.article_id)
        s = profile_mod.signal_strength(event, self.config.implicit_signals)
        if not vec:
            # Article with an empty vector carries no usable signal; record the
            # event so the history stays complete.
            p = dataclasses.replace(p, history=p.history + (event,), updated_at=event.timestamp)
        else:
            p = profile_mod.apply_feedback(p, vec, s, self.config.alpha, event=event)
        self.profiles[event.user_id] = p
        self._write_profile(event.user_id)
        return p

    # -- recommendation -----------------------------------------------------

    def daily_articles(self, date: str) -> List[str]:
        return sorted(d.id for d in self.articles.values() if d.published_date == date)

    def review(self, user_id: str, date: str) -> Review:
        p = self.get_profile(user_id)
        return recommend.generate_review(
            p, self.daily_articles(date), self.index, self.config.k, self.config.theta, date=date
        )

    def user_alerts(self, user_id: str) -> List[Alert]:
        self.get_profile(user_id)
        return [a for a in self.alerts if a.user_id == user_id]

    def digest(self, concept: str):
        return recommend.knowledge_digest(
            self.kb, self.index, concept, annotations_by_doc=self.annotations
        )

    # -- ontology management ------------------------------------------------

    def swap_domain(self, new_domain: DomainLayer) -> DanglingReport:
        all_anns = [a for anns in self.annotations.values() for a in anns]
        kb, report = kbase.swap_domain_ontology(
            self.kb, new_domain, lexicon=self.lexicon, annotations=all_anns
        )
        self.kb = kb
        self._trie = None
        self._write_ontology()
        return report


def rebuild(root) -> Store:
    """Rebuild index and profiles from articles plus feedback history, using
    the recorded ingestion order. Returns a fresh Store over the same files
    whose index.json and profiles/ have been rewritten from scratch."""
    old = Store.load(root)
    order = list(old.index.vectors)
    fresh = Store(old.root, old.config)
    fresh.kb = old.kb
    fresh.lexicon = list(old.lexicon)
    fresh.rules = list(old.rules)
    for doc_id in order:
        doc = old.articles[doc_id]
        anns = extract.annotate(doc, fresh.kb, fresh.lexicon, fresh.rules)
        result = extract.populate(fresh.kb, anns)
        fresh.kb = result.kb
        counts = index_mod.raw_counts(
            [a for a in result.annotations if a.normalized_value is None],
            fresh.kb,
            fresh.config.gamma,
        )
        vector = index_mod.tfidf_for_new_doc(fresh.index, counts)
        index_mod.index_article(fresh.index, doc_id, vector)
        fresh.articles[doc_id] = doc
        fresh.annotations[doc_id] = result.annotations
    for user_id, p in old.profiles.items():
        fresh.profiles[user_id] = profile_mod.replay(
            user_id,
            p.seeds,
            p.history,
            fresh.index.vectors,
            fresh.kb,
            fresh.config.alpha,
            fresh.config.implicit_signals,
        )
    fresh.alerts = list(old.alerts)
    fresh._write_index()
    for user_id in fresh.profiles:
        fresh._write_profile(user_id)
    return fresh

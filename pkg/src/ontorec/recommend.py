"""Recommendation layer: score articles against profiles, build the daily
customized review, raise alerts for newly discovered entities a user cares
about, and assemble concept-centric knowledge digests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import kbase
from .extract import Annotation
from .index import CorpusIndex, cosine
from .kbase import Assertion, KnowledgeBase
from .profile import Profile


class RecommendError(Exception):
    pass


class UnknownDoc(RecommendError):
    pass


@dataclass(frozen=True)
class Review:
    user_id: str
    date: str
    items: tuple  # ordered (article_id, score) pairs
    k: int
    threshold: float


@dataclass(frozen=True)
class Alert:
    user_id: str
    individual_id: str
    concept: str
    triggering_article_id: str
    date: str


@dataclass(frozen=True)
class Digest:
    concept: str
    individuals: tuple
    assertions: tuple
    supporting_articles: frozenset


def score(p: Profile, article_vector: Mapping[str, float]) -> float:
    return cosine(p.vector, article_vector)


def generate_review(
    p: Profile,
    daily_articles: Iterable[str],
    index: CorpusIndex,
    k: int,
    threshold: float,
    date: str = "",
) -> Review:
    """Top-k daily articles scoring at least the threshold, sorted by score
    descending with ties broken by ascending article id."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if not 0 <= threshold <= 1:
        raise ValueError("threshold must be in [0, 1]")
    scored = []
    for doc_id in daily_articles:
        vec = index.vectors.get(doc_id)
        if vec is None:
            raise UnknownDoc(doc_id)
        s = score(p, vec)
        if s >= threshold:
            scored.append((doc_id, s))
    scored.sort(key=lambda t: (-t[1], t[0]))
    return Review(user_id=p.user_id, date=date, items=tuple(scored[:k]), k=k, threshold=threshold)


def _relevance(kb: KnowledgeBase, individual_id: str, p: Profile) -> float:
    """Sum over the individual's types of the best profile weight among each
    type's ancestors-or-self."""
    total = 0.0
    for tid in kb.individuals[individual_id].types:
        best = max((p.vector.get(a, 0.0) for a in kbase.ancestors(kb, tid)), default=0.0)
        total += best
    return total


def detect_alerts(
    kb: KnowledgeBase,
    new_individuals: Sequence[str],
    p: Profile,
    tau: float,
    triggering_article: Mapping[str, str] = None,
    date: str = "",
    already_alerted: Iterable[tuple] = (),
) -> list:
    """One alert per new individual whose ancestor-aware profile relevance
    reaches tau. `already_alerted` holds (user_id, individual_id) pairs from
    the persistent alert log; those never fire again."""
    seen = set(already_alerted)
    out = []
    for iid in new_individuals:
        if (p.user_id, iid) in seen:
            continue
        if _relevance(kb, iid, p) >= tau:
            out.append(
                Alert(
                    user_id=p.user_id,
                    individual_id=iid,
                    concept=kb.individuals[iid].types[0],
                    triggering_article_id=(triggering_article or {}).get(iid, ""),
                    date=date,
                )
            )
    return out


def knowledge_digest(
    kb: KnowledgeBase,
    index: CorpusIndex,
    concept: str,
    annotations_by_doc: Mapping[str, Sequence[Annotation]] = None,
) -> Digest:
    """All inferred instances of a concept, the assertions about them, and the
    articles whose annotations link to any of those individuals."""
    individuals = kbase.instances_of(kb, concept, inferred=True)
    assertions = tuple(a for a in kb.assertions if a.subject in individuals)
    supporting = set()
    for doc_id, anns in (annotations_by_doc or {}).items():
        if any(a.individual in individuals for a in anns if a.individual):
            supporting.add(doc_id)
    return Digest(
        concept=concept,
        individuals=tuple(sorted(individuals)),
        assertions=assertions,
        supporting_articles=frozenset(supporting),
    )


def review_to_json(review: Review, titles: Mapping[str, str] = None) -> dict:
    return {
        "userId": review.user_id,
        "date": review.date,
        "items": [
            {"articleId": doc_id, "score": s, "title": (titles or {}).get(doc_id, "")}
            for doc_id, s in review.items
        ],
    }


def alert_to_json(a: Alert) -> dict:
    return {
        "userId": a.user_id,
        "individualId": a.individual_id,
        "concept": a.concept,
        "triggeringArticleId": a.triggering_article_id,
        "date": a.date,
    }

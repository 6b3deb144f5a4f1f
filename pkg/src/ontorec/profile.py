"""Per-user concept-vector profiles: cold-start from subscription criteria,
Rocchio-style updates from explicit ratings and implicit reading signals.

The profile vector is kept L2-normalized; the feedback history is append-only
and replaying it from the seeds reproduces the current vector exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

from .index import Vector, cosine, norm
from .kbase import KnowledgeBase


class ProfileError(Exception):
    pass


class EmptySeeds(ProfileError):
    pass


class UnknownConcept(ProfileError):
    pass


class UnknownSignalKind(ProfileError):
    pass


class EmptyArticleVector(ProfileError):
    pass


EXPLICIT = "explicit"
IMPLICIT = "implicit"

DEFAULT_IMPLICIT_SIGNALS = {"opened": 0.2, "readLong": 0.5, "skipped": -0.1}


@dataclass(frozen=True)
class FeedbackEvent:
    user_id: str
    article_id: str
    kind: str  # EXPLICIT or IMPLICIT
    rating: Optional[int] = None  # -1 or +1 for explicit events
    signal: Optional[str] = None  # opened | readLong | skipped for implicit events
    timestamp: str = ""  # ISO datetime


@dataclass(frozen=True)
class Profile:
    user_id: str
    vector: Mapping[str, float]
    seeds: frozenset
    history: tuple = ()
    updated_at: str = ""


def init_profile(user_id: str, seeds, kb: KnowledgeBase) -> Profile:
    seeds = frozenset(seeds)
    if not seeds:
        raise EmptySeeds("profile needs at least one seed concept")
    for cid in seeds:
        if cid not in kb.concepts:
            raise UnknownConcept(cid)
    w = 1.0 / math.sqrt(len(seeds))
    return Profile(user_id=user_id, vector={cid: w for cid in sorted(seeds)}, seeds=seeds)


def signal_strength(event: FeedbackEvent, implicit_signals: Mapping[str, float] = None) -> float:
    if event.kind == EXPLICIT:
        if event.rating not in (-1, 1):
            raise UnknownSignalKind(f"explicit rating must be -1 or +1, got {event.rating!r}")
        return float(event.rating)
    if event.kind == IMPLICIT:
        table = DEFAULT_IMPLICIT_SIGNALS if implicit_signals is None else implicit_signals
        if event.signal not in table:
            raise UnknownSignalKind(f"unknown implicit signal: {event.signal!r}")
        return float(table[event.signal])
    raise UnknownSignalKind(f"unknown feedback kind: {event.kind!r}")


def _normalize(v: Vector) -> Vector:
    n = norm(v)
    if n == 0.0:
        return {}
    return {t: w / n for t, w in v.items() if w != 0}


def apply_feedback(
    p: Profile,
    article_vector: Mapping[str, float],
    strength: float,
    alpha: float,
    event: Optional[FeedbackEvent] = None,
) -> Profile:
    """Blend the article vector into the profile.

    Positive strength pulls the profile toward the (normalized) article
    vector; negative strength subtracts it with per-dimension clipping at 0.
    A profile that collapses to the zero vector reverts to its seed init.
    """
    if not article_vector or norm(article_vector) == 0.0:
        raise EmptyArticleVector("article vector is empty")
    if not 0 < alpha <= 1:
        raise ValueError("alpha must be in (0, 1]")
    v = _normalize(dict(article_vector))
    pv = dict(p.vector)
    if strength >= 0:
        step = alpha * strength
        merged = {t: (1.0 - step) * w for t, w in pv.items()}
        for t, w in v.items():
            merged[t] = merged.get(t, 0.0) + step * w
    else:
        step = alpha * abs(strength)
        merged = dict(pv)
        for t, w in v.items():
            merged[t] = max(0.0, merged.get(t, 0.0) - step * w)
        merged = {t: w for t, w in merged.items() if w > 0}
    vector = _normalize(merged)
    if not vector:
        w = 1.0 / math.sqrt(len(p.seeds))
        vector = {cid: w for cid in sorted(p.seeds)}
    history = p.history + (event,) if event is not None else p.history
    ts = event.timestamp if event is not None else p.updated_at
    return replace(p, vector=vector, history=history, updated_at=ts)


def replay(
    user_id: str,
    seeds,
    history: Sequence[FeedbackEvent],
    article_vectors: Mapping[str, Mapping[str, float]],
    kb: KnowledgeBase,
    alpha: float,
    implicit_signals: Mapping[str, float] = None,
) -> Profile:
    """Reconstruct a profile by replaying its feedback history from scratch."""
    p = init_profile(user_id, seeds, kb)
    for event in history:
        s = signal_strength(event, implicit_signals)
        v = article_vectors[event.article_id]
        if not v:
            # Empty article vector carries no signal; keep the event on record.
            p = replace(p, history=p.history + (event,), updated_at=event.timestamp)
        else:
            p = apply_feedback(p, v, s, alpha, event=event)
    return p


# ---------------------------------------------------------------------------
# JSON persistence


def event_to_json(e: FeedbackEvent) -> dict:
    d = {
        "userId": e.user_id,
        "articleId": e.article_id,
        "kind": e.kind,
        "timestamp": e.timestamp,
    }
    if e.kind == EXPLICIT:
        d["rating"] = e.rating
    else:
        d["signal"] = e.signal
    return d


def event_from_json(d: dict) -> FeedbackEvent:
    return FeedbackEvent(
        user_id=d["userId"],
        article_id=d["articleId"],
        kind=d["kind"],
        rating=d.get("rating"),
        signal=d.get("signal"),
        timestamp=d.get("timestamp", ""),
    )


def profile_to_json(p: Profile) -> dict:
    return {
        "userId": p.user_id,
        "seeds": sorted(p.seeds),
        "vector": {t: p.vector[t] for t in sorted(p.vector)},
        "history": [event_to_json(e) for e in p.history],
        "updatedAt": p.updated_at,
    }


def profile_from_json(d: dict) -> Profile:
    return Profile(
        user_id=d["userId"],
        vector={t: float(w) for t, w in d["vector"].items()},
        seeds=frozenset(d["seeds"]),
        history=tuple(event_from_json(e) for e in d.get("history", ())),
        updated_at=d.get("updatedAt", ""),
    )

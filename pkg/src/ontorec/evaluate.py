"""Side-by-side evaluation of the concept recommender against the plain
keyword-VSM baseline: both systems rank the same corpus for each labeled
query, and precision/recall at k are reported per system.

The synonymy/polysemy contrast lives here: two articles using different
surfaces for one concept are both reachable through concepts but not through
keywords, and an ambiguous word retrieves keyword noise that the concept side
never sees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence

from . import index as index_mod
from .index import CorpusIndex, EmptyCorpus
from .profile import init_profile
from .store import Store


class EmptyEvalSpec(Exception):
    pass


@dataclass(frozen=True)
class EvalPair:
    id: str
    seeds: tuple  # concept ids for the concept-side query
    query_text: str  # raw text for the keyword-side query
    relevant: frozenset  # article ids judged relevant
    k: int = 2


@dataclass
class SystemResult:
    retrieved: List[str]
    precision: float
    recall: float


@dataclass
class MetricsReport:
    per_pair: Dict[str, Dict[str, SystemResult]]
    mean_precision: Dict[str, float]
    mean_recall: Dict[str, float]

    def to_json(self) -> dict:
        return {
            "pairs": {
                pid: {
                    system: {
                        "retrieved": r.retrieved,
                        "precision": r.precision,
                        "recall": r.recall,
                    }
                    for system, r in systems.items()
                }
                for pid, systems in self.per_pair.items()
            },
            "meanPrecision": self.mean_precision,
            "meanRecall": self.mean_recall,
        }


def _metrics(ranked: Sequence[str], relevant: frozenset, k: int) -> SystemResult:
    top = list(ranked[:k])
    hits = sum(1 for d in top if d in relevant)
    return SystemResult(
        retrieved=top,
        precision=hits / k if k else 0.0,
        recall=hits / len(relevant) if relevant else 0.0,
    )


def build_eval_indexes(store: Store):
    """Batch-build concept and keyword indexes over the whole corpus so both
    systems see identical, final document statistics."""
    concept_counts = {}
    keyword_counts = {}
    for doc_id, doc in store.articles.items():
        concept_counts[doc_id] = index_mod.raw_counts(
            store.vector_annotations(doc_id), store.kb, store.config.gamma
        )
        keyword_counts[doc_id] = index_mod.keyword_counts(doc)
    return index_mod.build_index(concept_counts), index_mod.build_index(keyword_counts)


def eval_baseline(store: Store, pairs: Sequence[EvalPair]) -> MetricsReport:
    if not store.articles:
        raise EmptyCorpus("no articles to evaluate against")
    if not pairs:
        raise EmptyEvalSpec("evaluation spec lists no pairs")
    concept_index, keyword_index = build_eval_indexes(store)
    per_pair: Dict[str, Dict[str, SystemResult]] = {}
    for pair in pairs:
        concept_q = dict(init_profile(pair.id, pair.seeds, store.kb).vector)
        keyword_q = index_mod.keyword_counts_from_text(pair.query_text)
        concept_ranked = [d for d, _ in index_mod.query(concept_index, concept_q, pair.k)]
        keyword_ranked = [d for d, _ in index_mod.query(keyword_index, keyword_q, pair.k)]
        per_pair[pair.id] = {
            "concept": _metrics(concept_ranked, pair.relevant, pair.k),
            "keyword": _metrics(keyword_ranked, pair.relevant, pair.k),
        }
    systems = ("concept", "keyword")
    n = len(per_pair)
    return MetricsReport(
        per_pair=per_pair,
        mean_precision={s: sum(r[s].precision for r in per_pair.values()) / n for s in systems},
        mean_recall={s: sum(r[s].recall for r in per_pair.values()) / n for s in systems},
    )


def pairs_from_json(items: Sequence[dict]) -> List[EvalPair]:
    return [
        EvalPair(
            id=d["id"],
            seeds=tuple(d.get("seeds", ())),
            query_text=d.get("queryText", ""),
            relevant=frozenset(d.get("relevant", ())),
            k=int(d.get("k", 2)),
        )
        for d in items
    ]

"""TF-IDF weighted vectors over ontology concepts (or plain keywords), an
inverted index for cosine ranking, and hierarchy-aware count expansion.

Vectors are sparse dicts mapping term id to nonnegative weight; zero weights
are never stored. Article vectors are frozen with the corpus statistics in
force at indexing time and are not re-weighted later.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Sequence

from . import kbase
from .extract import WORD, Annotation, Document, tokenize
from .kbase import KnowledgeBase, Layer


class IndexError_(Exception):
    pass


class DuplicateDoc(IndexError_):
    pass


class EmptyCorpus(IndexError_):
    pass


class UnknownConcept(IndexError_):
    pass


Vector = Dict[str, float]

# Layers whose concepts participate in article/profile vectors.
VECTOR_LAYERS = (Layer.DOMAIN, Layer.UPPER)


def raw_counts(
    annotations: Sequence[Annotation], kb: KnowledgeBase, gamma: float = 0.5
) -> Vector:
    """Concept counts with hierarchy expansion: each annotation contributes 1
    to its concept and gamma**d to every strict ancestor at shortest-path
    distance d. Expansion stays within the domain and upper layers. gamma=1
    disables the decay; expansion off altogether means passing gamma with an
    empty hierarchy or filtering beforehand.
    """
    if not 0 < gamma <= 1:
        raise ValueError("gamma must be in (0, 1]")
    counts: Vector = {}
    for ann in annotations:
        if ann.concept not in kb.concepts:
            raise UnknownConcept(ann.concept)
        for cid, d in kbase.ancestor_distances(kb, ann.concept).items():
            if kb.concepts[cid].layer not in VECTOR_LAYERS:
                continue
            counts[cid] = counts.get(cid, 0.0) + gamma**d
    return counts


@dataclass
class CorpusIndex:
    """Doc-count, document frequencies, frozen vectors, inverted postings."""

    n_docs: int = 0
    df: Dict[str, int] = field(default_factory=dict)
    vectors: Dict[str, Vector] = field(default_factory=dict)
    inverted: Dict[str, set] = field(default_factory=dict)


def tfidf(index: CorpusIndex, counts: Mapping[str, float]) -> Vector:
    """Salton-style weights: (1 + ln tf) * ln(N / df). Terms unseen in the
    corpus (df=0) and nonpositive weights are omitted."""
    if index.n_docs < 1:
        raise EmptyCorpus("cannot weight against an empty corpus")
    vec: Vector = {}
    for term, count in counts.items():
        if count <= 0:
            continue
        df = index.df.get(term, 0)
        if df <= 0:
            continue
        w = (1.0 + math.log(count)) * math.log(index.n_docs / df)
        if w > 0:
            vec[term] = w
    return vec


def tfidf_for_new_doc(index: CorpusIndex, counts: Mapping[str, float]) -> Vector:
    """Weight a document that is about to be indexed, counting the document
    itself in N and df so the very first article gets a well-defined vector."""
    staged = CorpusIndex(n_docs=index.n_docs + 1, df=dict(index.df))
    for term, count in counts.items():
        if count > 0:
            staged.df[term] = staged.df.get(term, 0) + 1
    return tfidf(staged, counts)


def norm(v: Mapping[str, float]) -> float:
    # Summation runs in sorted term order so the result does not depend on
    # dict insertion order (a freshly built and a reloaded vector must score
    # bit-identically).
    return math.sqrt(sum(v[t] * v[t] for t in sorted(v)))


def cosine(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(a[t] * b[t] for t in sorted(a) if t in b)
    na, nb = norm(a), norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def index_article(index: CorpusIndex, doc_id: str, vector: Mapping[str, float]) -> CorpusIndex:
    if doc_id in index.vectors:
        raise DuplicateDoc(doc_id)
    vector = {t: w for t, w in vector.items() if w != 0}
    index.n_docs += 1
    index.vectors[doc_id] = dict(vector)
    for term in vector:
        index.df[term] = index.df.get(term, 0) + 1
        index.inverted.setdefault(term, set()).add(doc_id)
    return index


def query(index: CorpusIndex, q: Mapping[str, float], k: int) -> list:
    """Top-k (doc_id, cosine) over documents sharing at least one term with q,
    restricted to score > 0; ties broken by ascending doc id."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    candidates = set()
    for term in q:
        candidates |= index.inverted.get(term, set())
    scored = []
    for doc_id in candidates:
        s = cosine(q, index.vectors[doc_id])
        if s > 0:
            scored.append((doc_id, s))
    scored.sort(key=lambda t: (-t[1], t[0]))
    return scored[:k]


def keyword_counts_from_text(text: str) -> Vector:
    counts = Counter(t.text.lower() for t in tokenize(text) if t.kind == WORD)
    return dict(counts)


def keyword_counts(doc: Document) -> Vector:
    """Lowercased word-token counts of title+body (the keyword-VSM baseline)."""
    return keyword_counts_from_text(doc.title + "\n" + doc.body)


def keyword_vector(doc: Document, keyword_index: CorpusIndex) -> Vector:
    """TF-IDF keyword vector against a parallel keyword index."""
    return tfidf(keyword_index, keyword_counts(doc))


def build_index(counts_by_doc: Mapping[str, Mapping[str, float]]) -> CorpusIndex:
    """Batch-build an index: document frequencies over raw counts, then TF-IDF
    vectors for every document against the final corpus statistics. Stored df
    is re-derived from the nonzero vector entries."""
    raw_df: Dict[str, int] = {}
    for counts in counts_by_doc.values():
        for term, c in counts.items():
            if c > 0:
                raw_df[term] = raw_df.get(term, 0) + 1
    stats = CorpusIndex(n_docs=len(counts_by_doc), df=raw_df)
    out = CorpusIndex()
    for doc_id, counts in counts_by_doc.items():
        index_article(out, doc_id, tfidf(stats, counts) if stats.n_docs else {})
    return out


# ---------------------------------------------------------------------------
# Snapshot persistence


def index_to_json(index: CorpusIndex) -> str:
    # Weights are serialized at full float precision so that a reloaded
    # index reproduces every score bit for bit.
    doc = {
        "N": index.n_docs,
        "df": {t: index.df[t] for t in sorted(index.df)},
        "vectors": {
            doc_id: {t: w for t, w in sorted(vec.items())}
            for doc_id, vec in index.vectors.items()
        },
    }
    return json.dumps(doc, ensure_ascii=False, indent=1)


def index_from_json(text: str) -> CorpusIndex:
    doc = json.loads(text)
    index = CorpusIndex(n_docs=doc["N"], df=dict(doc["df"]))
    for doc_id, vec in doc["vectors"].items():
        index.vectors[doc_id] = {t: float(w) for t, w in vec.items()}
        for term in vec:
            index.inverted.setdefault(term, set()).add(doc_id)
    return index

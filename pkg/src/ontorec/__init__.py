"""Ontology-based recommender for economic news: a four-layer knowledge base,
gazetteer/pattern extraction, TF-IDF concept vectors, feedback-driven user
profiles, daily reviews and entity alerts."""

from .config import Config, load_config
from .extract import Annotation, Document, LexicalEntry, PatternRule, annotate, tokenize
from .index import CorpusIndex, cosine, query, raw_counts, tfidf
from .kbase import (
    Concept,
    DanglingReport,
    DomainLayer,
    Individual,
    KnowledgeBase,
    Layer,
    PropertyDef,
)
from .profile import FeedbackEvent, Profile, apply_feedback, init_profile
from .recommend import Alert, Digest, Review, generate_review
from .store import IngestReport, Store

__all__ = [
    "Alert",
    "Annotation",
    "Concept",
    "Config",
    "CorpusIndex",
    "DanglingReport",
    "Digest",
    "Document",
    "DomainLayer",
    "FeedbackEvent",
    "Individual",
    "IngestReport",
    "KnowledgeBase",
    "Layer",
    "LexicalEntry",
    "PatternRule",
    "Profile",
    "PropertyDef",
    "Review",
    "Store",
    "annotate",
    "apply_feedback",
    "cosine",
    "generate_review",
    "init_profile",
    "load_config",
    "query",
    "raw_counts",
    "tfidf",
    "tokenize",
]

__version__ = "0.1.0"

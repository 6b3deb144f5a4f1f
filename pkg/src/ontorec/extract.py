"""Ontology-driven information extraction: tokenizer, gazetteer matching over
the lexical layer, finite-state token patterns (with a built-in French date
rule), deterministic overlap resolution, and ABox population from newly
discovered entities.
"""

from __future__ import annotations

import math
import re
import unicodedata
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from . import kbase
from .kbase import Individual, KnowledgeBase, Layer

WORD = "word"
NUMBER = "number"
PUNCT = "punct"
SYMBOL = "symbol"

# Maximal letter runs (apostrophes allowed inside, for French elisions),
# digit runs, or a single other non-space character.
_TOKEN_RE = re.compile(
    r"[^\W\d_]+(?:['’][^\W\d_]+)*" r"|\d+" r"|[^\s]",
    re.UNICODE,
)


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    kind: str


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    body: str
    published_date: str  # ISO date


@dataclass(frozen=True)
class LexicalEntry:
    surface: str
    target: str  # concept id or individual id
    case_sensitive: bool = False


@dataclass(frozen=True)
class PatternRule:
    name: str
    priority: int
    pattern: tuple  # sequence of matcher dicts
    concept: str
    create_individual: bool = False
    normalizer: str = "none"  # "none" | "date"


@dataclass(frozen=True)
class Annotation:
    doc_id: str
    start: int
    end: int
    concept: str
    individual: Optional[str] = None
    source: str = "gazetteer"  # "gazetteer" | "pattern"
    rule_name: Optional[str] = None
    normalized_value: Optional[str] = None
    surface: str = ""  # covered text (in-memory convenience, not serialized)
    creates_individual: bool = False

    @property
    def id(self) -> str:
        return f"{self.doc_id}:{self.start}-{self.end}"


def tokenize(text: str) -> list:
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        t = m.group()
        if t[0].isdigit():
            kind = NUMBER
        elif t[0].isalpha() or len(t) > 1:
            # Multi-character runs are always word-like: \w admits a few
            # numeric-presentation characters (e.g. "¼") that are neither
            # digits nor letters.
            kind = WORD
        elif unicodedata.category(t[0]).startswith("P"):
            kind = PUNCT
        else:
            kind = SYMBOL
        tokens.append(Token(text=t, start=m.start(), end=m.end(), kind=kind))
    return tokens


def _fold(s: str) -> str:
    return s.casefold()




def primary_type(kb: KnowledgeBase, individual_id: str) -> str:
    return kb.individuals[individual_id].types[0]


def _annotation_for_entry(
    kb: KnowledgeBase, entry: LexicalEntry, doc_id: str, span_tokens: Sequence[Token]
) -> Annotation:
    individual = None
    if entry.target in kb.individuals:
        concept = primary_type(kb, entry.target)
        individual = entry.target
    else:
        concept = entry.target
    return Annotation(
        doc_id=doc_id,
        start=span_tokens[0].start,
        end=span_tokens[-1].end,
        concept=concept,
        individual=individual,
        source="gazetteer",
        surface=" ".join(t.text for t in span_tokens),
    )


def _better_entry(a: LexicalEntry, b: LexicalEntry, kb: KnowledgeBase) -> LexicalEntry:
    """Tie-break two entries matching the same span: individual-bearing wins,
    then the lexicographically smaller target id."""
    a_ind = a.target in kb.individuals
    b_ind = b.target in kb.individuals
    if a_ind != b_ind:
        return a if a_ind else b
    return a if a.target <= b.target else b


class _TrieNode:
    __slots__ = ("children", "entries")

    def __init__(self):
        self.children = {}
        self.entries = []


def build_lexicon_trie(lexicon: Iterable[LexicalEntry]):
    """Token-level trie over case-folded entry surfaces, for leftmost-longest
    scanning without trying every entry at every position. Keys are always
    folded; case-sensitive entries are re-verified exactly at match time."""
    root = _TrieNode()
    for entry in lexicon:
        texts = [t.text for t in tokenize(entry.surface)]
        if not texts:
            continue
        node = root
        for key in (_fold(t) for t in texts):
            node = node.children.setdefault(key, _TrieNode())
        node.entries.append(entry)
    return root


def gazetteer_match(
    tokens: Sequence[Token],
    lexicon: Sequence[LexicalEntry],
    kb: KnowledgeBase,
    doc_id: str = "",
    trie=None,
) -> list:
    """Leftmost-longest gazetteer matching over the token-text sequence.

    Case-insensitive entries are matched under Unicode case folding. After a
    match the scan resumes past it, so gazetteer annotations never overlap.
    """
    if trie is None:
        trie = build_lexicon_trie(lexicon)
    folded = [_fold(t.text) for t in tokens]
    out = []
    i, n = 0, len(tokens)
    while i < n:
        best_end = -1
        best_entry = None
        node = trie
        j = i
        while j < n:
            node = node.children.get(folded[j])
            if node is None:
                break
            for entry in node.entries:
                if _entry_matches_at(entry, tokens, i, j + 1):
                    if j + 1 > best_end:
                        best_end = j + 1
                        best_entry = entry
                    elif j + 1 == best_end and best_entry is not None:
                        best_entry = _better_entry(best_entry, entry, kb)
            j += 1
        if best_entry is not None:
            out.append(_annotation_for_entry(kb, best_entry, doc_id, tokens[i:best_end]))
            i = best_end
        else:
            i += 1
    return out


def _entry_matches_at(entry: LexicalEntry, tokens: Sequence[Token], start: int, end: int) -> bool:
    texts = [t.text for t in tokenize(entry.surface)]
    if len(texts) != end - start:
        return False
    for pat, tok in zip(texts, tokens[start:end]):
        if entry.case_sensitive:
            if pat != tok.text:
                return False
        elif _fold(pat) != _fold(tok.text):
            return False
    return True


# ---------------------------------------------------------------------------
# Token patterns

_FRENCH_MONTHS = {
    "janvier": 1,
    "fevrier": 2,
    "février": 2,
    "mars": 3,
    "avril": 4,
    "mai": 5,
    "juin": 6,
    "juillet": 7,
    "aout": 8,
    "août": 8,
    "septembre": 9,
    "octobre": 10,
    "novembre": 11,
    "decembre": 12,
    "décembre": 12,
}


def _matcher_matches(matcher: dict, token: Token) -> bool:
    if "literal" in matcher:
        if matcher.get("caseSensitive"):
            return token.text == matcher["literal"]
        return _fold(token.text) == _fold(matcher["literal"])
    if "kind" in matcher:
        return token.kind == matcher["kind"]
    if "regex" in matcher:
        return re.fullmatch(matcher["regex"], token.text) is not None
    raise ValueError(f"unknown matcher: {matcher!r}")


def _match_sequence(pattern: Sequence[dict], tokens: Sequence[Token], i: int) -> Optional[int]:
    """Longest match of the matcher sequence starting at token i; returns the
    end token index, or None. Optional groups prefer presence."""
    if not pattern:
        return i
    head, rest = pattern[0], pattern[1:]
    if "optional" in head:
        taken = _match_sequence(head["optional"], tokens, i)
        if taken is not None:
            end = _match_sequence(rest, tokens, taken)
            if end is not None:
                return end
        return _match_sequence(rest, tokens, i)
    if i < len(tokens) and _matcher_matches(head, tokens[i]):
        return _match_sequence(rest, tokens, i + 1)
    return None


def _normalize_date(span: Sequence[Token]) -> Optional[str]:
    """Map matched date tokens to ISO at day/month/year precision."""
    day = month = year = None
    for tok in span:
        if tok.kind == NUMBER:
            v = int(tok.text)
            if len(tok.text) == 4:
                year = v
            else:
                day = v
        elif tok.kind == WORD:
            m = _FRENCH_MONTHS.get(_fold(tok.text))
            if m is not None:
                month = m
    if year is None:
        return None
    if month is None:
        return f"{year:04d}"
    if day is None:
        return f"{year:04d}-{month:02d}"
    return f"{year:04d}-{month:02d}-{day:02d}"


_MONTH_REGEX = "|".join(sorted({m for m in _FRENCH_MONTHS}))

FRENCH_DATE_RULE = PatternRule(
    name="french-date",
    priority=10,
    pattern=(
        {"optional": ({"regex": r"[0-3]?\d"},)},
        {"regex": _MONTH_REGEX},
        {"regex": r"\d{4}"},
    ),
    concept="upper:Temporal",
    normalizer="date",
)


def pattern_match(
    tokens: Sequence[Token], rules: Sequence[PatternRule], kb: KnowledgeBase, doc_id: str = ""
) -> list:
    """Apply each rule at every start position; every (longest) match yields
    one annotation. Competing spans are settled later by resolve_overlaps."""
    out = []
    for rule in rules:
        for i in range(len(tokens)):
            end = _match_sequence(rule.pattern, tokens, i)
            if end is None or end == i:
                continue
            span = tokens[i:end]
            normalized = None
            if rule.normalizer == "date":
                normalized = _normalize_date(span)
                if normalized is None:
                    continue
            out.append(
                Annotation(
                    doc_id=doc_id,
                    start=span[0].start,
                    end=span[-1].end,
                    concept=rule.concept,
                    source="pattern",
                    rule_name=rule.name,
                    normalized_value=normalized,
                    surface=" ".join(t.text for t in span),
                    creates_individual=rule.create_individual,
                )
            )
    return out


def _priority(ann: Annotation, rules_by_name: dict) -> float:
    if ann.source == "gazetteer":
        return math.inf
    rule = rules_by_name.get(ann.rule_name)
    return rule.priority if rule is not None else 0


def annotation_sort_key(ann: Annotation, rules_by_name: dict):
    """Tournament order: longer span, individual-bearing, higher priority,
    leftmost, lexicographically smaller rule name."""
    return (
        -(ann.end - ann.start),
        0 if ann.individual else 1,
        -_priority(ann, rules_by_name),
        ann.start,
        ann.rule_name or "",
    )


def resolve_overlaps(annotations: Sequence[Annotation], rules: Sequence[PatternRule] = ()) -> list:
    rules_by_name = {r.name: r for r in rules}
    ranked = sorted(annotations, key=lambda a: annotation_sort_key(a, rules_by_name))
    chosen = []
    for ann in ranked:
        if all(ann.end <= c.start or ann.start >= c.end for c in chosen):
            chosen.append(ann)
    chosen.sort(key=lambda a: (a.start, a.end))
    return chosen


def annotate(
    doc: Document,
    kb: KnowledgeBase,
    lexicon: Sequence[LexicalEntry],
    rules: Sequence[PatternRule],
    trie=None,
) -> list:
    text = doc.title + "\n" + doc.body
    tokens = tokenize(text)
    anns = gazetteer_match(tokens, lexicon, kb, doc_id=doc.id, trie=trie)
    anns += pattern_match(tokens, rules, kb, doc_id=doc.id)
    resolved = resolve_overlaps(anns, rules)
    # Replace the token-joined surface with the exact text slice.
    return [replace(a, surface=text[a.start : a.end]) for a in resolved]


# ---------------------------------------------------------------------------
# Ontology population


@dataclass
class PopulateResult:
    kb: KnowledgeBase
    new_individuals: list
    new_entries: list  # LexicalEntry values for the new individuals
    annotations: list  # input annotations with individual links filled in


def _dedup_surface(surface: str) -> str:
    return " ".join(surface.split()).casefold()


def _slug(surface: str) -> str:
    s = " ".join(surface.split()).casefold()
    s = "".join(ch if ch.isalnum() else "-" for ch in s)
    return re.sub(r"-+", "-", s).strip("-") or "entity"


def populate(kb: KnowledgeBase, annotations: Sequence[Annotation]) -> PopulateResult:
    """Create individuals for pattern annotations flagged create_individual.

    Dedup key is (concept, case-folded whitespace-collapsed surface), checked
    against existing individuals of the same concept and within the batch.
    Known entities are linked instead of duplicated.
    """
    by_key = {}
    for ind in kb.individuals.values():
        for tid in ind.types:
            by_key.setdefault((tid, _dedup_surface(ind.label)), ind.id)

    new_individuals = []
    new_entries = []
    linked = []
    for ann in annotations:
        if ann.source != "pattern" or not ann.creates_individual:
            linked.append(ann)
            continue
        key = (ann.concept, _dedup_surface(ann.surface))
        existing = by_key.get(key)
        if existing is None:
            layer = kb.concepts[ann.concept].layer
            base = f"{layer.value}:{_slug(ann.surface)}"
            new_id = base
            suffix = 2
            while new_id in kb.individuals:
                new_id = f"{base}-{suffix}"
                suffix += 1
            label = " ".join(ann.surface.split())
            kb = kbase.add_individual(
                kb, Individual(id=new_id, label=label, layer=layer, types=(ann.concept,))
            )
            by_key[key] = new_id
            new_individuals.append(new_id)
            new_entries.append(LexicalEntry(surface=label, target=new_id))
            existing = new_id
        linked.append(replace(ann, individual=existing))
    return PopulateResult(
        kb=kb, new_individuals=new_individuals, new_entries=new_entries, annotations=linked
    )


# ---------------------------------------------------------------------------
# JSON wire formats


def lexicon_from_json(items: Sequence[dict]) -> list:
    return [
        LexicalEntry(
            surface=d["surface"],
            target=d["target"],
            case_sensitive=bool(d.get("caseSensitive", False)),
        )
        for d in items
    ]


def lexicon_to_json(lexicon: Sequence[LexicalEntry]) -> list:
    return [
        {"surface": e.surface, "target": e.target, "caseSensitive": e.case_sensitive}
        for e in lexicon
    ]


def rules_from_json(items: Sequence[dict]) -> list:
    out = []
    for d in items:
        action = d.get("action", {})
        out.append(
            PatternRule(
                name=d["name"],
                priority=int(d.get("priority", 0)),
                pattern=_pattern_from_json(d["pattern"]),
                concept=action["annotate"],
                create_individual=bool(action.get("createIndividual", False)),
                normalizer=action.get("normalizer", "none"),
            )
        )
    return out


def _pattern_from_json(pattern: Sequence[dict]) -> tuple:
    out = []
    for m in pattern:
        if "optional" in m:
            out.append({"optional": _pattern_from_json(m["optional"])})
        else:
            out.append(dict(m))
    return tuple(out)


def _pattern_to_json(pattern: Sequence[dict]) -> list:
    out = []
    for m in pattern:
        if "optional" in m:
            out.append({"optional": _pattern_to_json(m["optional"])})
        else:
            out.append(dict(m))
    return out


def rules_to_json(rules: Sequence[PatternRule]) -> list:
    out = []
    for r in rules:
        action = {"annotate": r.concept}
        if r.create_individual:
            action["createIndividual"] = True
        if r.normalizer != "none":
            action["normalizer"] = r.normalizer
        out.append(
            {
                "name": r.name,
                "priority": r.priority,
                "pattern": _pattern_to_json(r.pattern),
                "action": action,
            }
        )
    return out


def annotation_to_json(ann: Annotation) -> dict:
    return {
        "docId": ann.doc_id,
        "span": [ann.start, ann.end],
        "concept": ann.concept,
        "individual": ann.individual,
        "source": ann.source,
        "ruleName": ann.rule_name,
        "normalizedValue": ann.normalized_value,
    }


def annotation_from_json(d: dict) -> Annotation:
    return Annotation(
        doc_id=d["docId"],
        start=d["span"][0],
        end=d["span"][1],
        concept=d["concept"],
        individual=d.get("individual"),
        source=d["source"],
        rule_name=d.get("ruleName"),
        normalized_value=d.get("normalizedValue"),
    )


def document_to_json(doc: Document) -> dict:
    return {
        "id": doc.id,
        "title": doc.title,
        "body": doc.body,
        "publishedDate": doc.published_date,
    }


def document_from_json(d: dict) -> Document:
    return Document(
        id=d["id"], title=d["title"], body=d["body"], published_date=d["publishedDate"]
    )

"""Four-layer knowledge base: concept hierarchy (TBox) plus individuals and
relation assertions (ABox), partitioned into upper, domain, lexical and corpus
layers. The domain layer can be swapped wholesale without touching the others.

All mutating operations are functional: they return a new KnowledgeBase and
leave the input untouched, so a failed operation can never corrupt state and
readers can keep using the snapshot they hold.
"""

from __future__ import annotations

import datetime as _dt
import json
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Union


class Layer(str, Enum):
    UPPER = "upper"
    DOMAIN = "domain"
    LEXICAL = "lexical"
    CORPUS = "corpus"


DATATYPES = ("string", "date", "integer")


class KbError(Exception):
    """Base class for knowledge-base operation failures."""


class DuplicateId(KbError):
    pass


class UnknownId(KbError):
    pass


class UnknownParent(KbError):
    pass


class LayerViolation(KbError):
    pass


class CycleDetected(KbError):
    pass


class DomainViolation(KbError):
    pass


class RangeViolation(KbError):
    pass


class InvalidDomainLayer(KbError):
    pass


# Which concept layers may appear as parents of a concept in a given layer,
# and as types of an individual in a given layer.
_ALLOWED_PARENT_LAYERS = {
    Layer.UPPER: {Layer.UPPER},
    Layer.DOMAIN: {Layer.DOMAIN, Layer.UPPER},
    Layer.LEXICAL: {Layer.LEXICAL, Layer.UPPER},
    Layer.CORPUS: {Layer.CORPUS, Layer.UPPER},
}
_ALLOWED_TYPE_LAYERS = _ALLOWED_PARENT_LAYERS


@dataclass(frozen=True)
class Concept:
    id: str
    label: str
    layer: Layer
    parents: frozenset = frozenset()


@dataclass(frozen=True)
class PropertyDef:
    id: str
    domain_concept: str
    range: str  # concept id, or one of DATATYPES


@dataclass(frozen=True)
class Individual:
    id: str
    label: str
    layer: Layer
    types: tuple  # nonempty tuple of concept ids; first entry is the primary type


@dataclass(frozen=True)
class Literal:
    value: Union[str, int]
    datatype: str


@dataclass(frozen=True)
class Assertion:
    subject: str
    property: str
    object: Union[str, Literal]  # individual id or typed literal


@dataclass(frozen=True)
class Violation:
    rule: str
    offending_id: str
    message: str


@dataclass(frozen=True)
class KnowledgeBase:
    concepts: Mapping[str, Concept] = field(default_factory=dict)
    properties: Mapping[str, PropertyDef] = field(default_factory=dict)
    individuals: Mapping[str, Individual] = field(default_factory=dict)
    assertions: tuple = ()
    quarantined: tuple = ()  # assertions invalidated by a domain swap; kept as evidence
    version: int = 0


@dataclass(frozen=True)
class DomainLayer:
    """Replacement content for the domain layer of a knowledge base."""

    concepts: tuple = ()
    properties: tuple = ()
    individuals: tuple = ()


@dataclass(frozen=True)
class DanglingReport:
    """Ids left pointing at removed domain content after a swap."""

    lexical_entries: tuple = ()  # surfaces of lexicon entries with removed targets
    annotation_refs: tuple = ()  # annotation ids referencing removed concepts/individuals
    assertions: tuple = ()  # quarantined Assertion values

    @property
    def empty(self) -> bool:
        return not (self.lexical_entries or self.annotation_refs or self.assertions)


def _require_concept(kb: KnowledgeBase, cid: str) -> Concept:
    c = kb.concepts.get(cid)
    if c is None:
        raise UnknownId(f"unknown concept: {cid}")
    return c


def add_concept(kb: KnowledgeBase, c: Concept) -> KnowledgeBase:
    if c.id in kb.concepts:
        raise DuplicateId(f"concept already present: {c.id}")
    for pid in c.parents:
        parent = kb.concepts.get(pid)
        if parent is None:
            raise UnknownParent(f"unknown parent {pid} for {c.id}")
        if parent.layer not in _ALLOWED_PARENT_LAYERS[c.layer]:
            raise LayerViolation(
                f"{c.layer.value} concept {c.id} cannot have {parent.layer.value} parent {pid}"
            )
    concepts = dict(kb.concepts)
    concepts[c.id] = c
    return replace(kb, concepts=concepts, version=kb.version + 1)


def add_property(kb: KnowledgeBase, p: PropertyDef) -> KnowledgeBase:
    if p.id in kb.properties:
        raise DuplicateId(f"property already present: {p.id}")
    _require_concept(kb, p.domain_concept)
    if p.range not in DATATYPES:
        _require_concept(kb, p.range)
    properties = dict(kb.properties)
    properties[p.id] = p
    return replace(kb, properties=properties, version=kb.version + 1)


def add_individual(kb: KnowledgeBase, ind: Individual) -> KnowledgeBase:
    if ind.id in kb.individuals:
        raise DuplicateId(f"individual already present: {ind.id}")
    if not ind.types:
        raise KbError(f"individual {ind.id} has no types")
    for tid in ind.types:
        c = _require_concept(kb, tid)
        if c.layer not in _ALLOWED_TYPE_LAYERS[ind.layer]:
            raise LayerViolation(
                f"{ind.layer.value} individual {ind.id} typed by {c.layer.value} concept {tid}"
            )
    individuals = dict(kb.individuals)
    individuals[ind.id] = ind
    return replace(kb, individuals=individuals, version=kb.version + 1)


def add_subclass_axiom(kb: KnowledgeBase, child: str, parent: str) -> KnowledgeBase:
    c = _require_concept(kb, child)
    p = _require_concept(kb, parent)
    if child == parent or child in ancestors(kb, parent):
        raise CycleDetected(f"{child} <= {parent} would create a cycle")
    if p.layer not in _ALLOWED_PARENT_LAYERS[c.layer]:
        raise LayerViolation(
            f"{c.layer.value} concept {child} cannot have {p.layer.value} parent {parent}"
        )
    concepts = dict(kb.concepts)
    concepts[child] = replace(c, parents=c.parents | {parent})
    return replace(kb, concepts=concepts, version=kb.version + 1)


def ancestors(kb: KnowledgeBase, cid: str) -> set:
    """Reflexive-transitive closure of the subclass relation, upward."""
    _require_concept(kb, cid)
    seen = {cid}
    queue = deque([cid])
    while queue:
        for pid in kb.concepts[queue.popleft()].parents:
            if pid not in seen:
                seen.add(pid)
                queue.append(pid)
    return seen


def descendants(kb: KnowledgeBase, cid: str) -> set:
    """Reflexive-transitive closure downward."""
    _require_concept(kb, cid)
    children = {}
    for c in kb.concepts.values():
        for pid in c.parents:
            children.setdefault(pid, []).append(c.id)
    seen = {cid}
    queue = deque([cid])
    while queue:
        for kid in children.get(queue.popleft(), ()):
            if kid not in seen:
                seen.add(kid)
                queue.append(kid)
    return seen


def ancestor_distances(kb: KnowledgeBase, cid: str) -> dict:
    """Shortest hop count from cid to each of its ancestors (cid itself at 0)."""
    _require_concept(kb, cid)
    dist = {cid: 0}
    queue = deque([cid])
    while queue:
        cur = queue.popleft()
        for pid in kb.concepts[cur].parents:
            if pid not in dist:
                dist[pid] = dist[cur] + 1
                queue.append(pid)
    return dist


def instances_of(kb: KnowledgeBase, cid: str, inferred: bool = False) -> set:
    _require_concept(kb, cid)
    if inferred:
        accepted = descendants(kb, cid)
        return {i.id for i in kb.individuals.values() if accepted.intersection(i.types)}
    return {i.id for i in kb.individuals.values() if cid in i.types}


def _check_literal(lit: Literal, expected: str) -> bool:
    if lit.datatype != expected:
        return False
    if expected == "integer":
        return isinstance(lit.value, int) and not isinstance(lit.value, bool)
    if expected == "date":
        if not isinstance(lit.value, str):
            return False
        try:
            _dt.date.fromisoformat(lit.value)
        except ValueError:
            return False
        return True
    return isinstance(lit.value, str)


def assert_relation(kb: KnowledgeBase, a: Assertion) -> KnowledgeBase:
    subject = kb.individuals.get(a.subject)
    if subject is None:
        raise UnknownId(f"unknown subject: {a.subject}")
    prop = kb.properties.get(a.property)
    if prop is None:
        raise UnknownId(f"unknown property: {a.property}")
    dom = descendants(kb, prop.domain_concept)
    if not dom.intersection(subject.types):
        raise DomainViolation(
            f"{a.subject} is not typed under {prop.domain_concept} (property {a.property})"
        )
    if prop.range in DATATYPES:
        if not isinstance(a.object, Literal) or not _check_literal(a.object, prop.range):
            raise RangeViolation(f"property {a.property} expects a {prop.range} literal")
    else:
        if isinstance(a.object, Literal):
            raise RangeViolation(f"property {a.property} expects an individual")
        obj = kb.individuals.get(a.object)
        if obj is None:
            raise UnknownId(f"unknown object: {a.object}")
        rng = descendants(kb, prop.range)
        if not rng.intersection(obj.types):
            raise RangeViolation(
                f"{a.object} is not typed under {prop.range} (property {a.property})"
            )
    return replace(kb, assertions=kb.assertions + (a,), version=kb.version + 1)


def _assertion_refs(a: Assertion) -> set:
    refs = {a.subject, a.property}
    if not isinstance(a.object, Literal):
        refs.add(a.object)
    return refs


def swap_domain_ontology(
    kb: KnowledgeBase,
    new_domain: DomainLayer,
    lexicon: Sequence = (),
    annotations: Sequence = (),
):
    """Replace the domain layer atomically, leaving the other three untouched.

    `lexicon` (LexicalEntry values) and `annotations` (Annotation values) are
    external references to check: anything pointing at a removed domain id is
    reported as dangling, never deleted. Assertions that dangle are moved to
    the quarantine list on the returned kb.
    """
    # Validate the replacement layer in isolation against the existing upper layer.
    staged = KnowledgeBase(
        concepts={cid: c for cid, c in kb.concepts.items() if c.layer is Layer.UPPER},
        properties={},
        individuals={},
    )
    try:
        for c in new_domain.concepts:
            if c.layer is not Layer.DOMAIN:
                raise LayerViolation(f"{c.id} is not a domain-layer concept")
            staged = add_concept(staged, replace(c, parents=frozenset()))
        for c in new_domain.concepts:
            for pid in c.parents:
                staged = add_subclass_axiom(staged, c.id, pid)
        for p in new_domain.properties:
            staged = add_property(staged, p)
        for ind in new_domain.individuals:
            if ind.layer is not Layer.DOMAIN:
                raise LayerViolation(f"{ind.id} is not a domain-layer individual")
            staged = add_individual(staged, ind)
    except KbError as exc:
        raise InvalidDomainLayer(str(exc)) from exc

    concepts = {cid: c for cid, c in kb.concepts.items() if c.layer is not Layer.DOMAIN}
    concepts.update({c.id: c for c in new_domain.concepts})
    old_prop_layer = {
        pid: kb.concepts[p.domain_concept].layer for pid, p in kb.properties.items()
    }
    properties = {
        pid: p for pid, p in kb.properties.items() if old_prop_layer[pid] is not Layer.DOMAIN
    }
    properties.update({p.id: p for p in new_domain.properties})
    individuals = {
        iid: i for iid, i in kb.individuals.items() if i.layer is not Layer.DOMAIN
    }
    individuals.update({i.id: i for i in new_domain.individuals})

    known = set(concepts) | set(properties) | set(individuals)
    kept, dropped = [], []
    for a in kb.assertions:
        (kept if _assertion_refs(a) <= known else dropped).append(a)

    dangling_lexical = tuple(
        e.surface for e in lexicon if getattr(e, "target", None) not in known
    )
    dangling_annotations = tuple(
        ann.id
        for ann in annotations
        if ann.concept not in known
        or (getattr(ann, "individual", None) and ann.individual not in known)
    )

    new_kb = replace(
        kb,
        concepts=concepts,
        properties=properties,
        individuals=individuals,
        assertions=tuple(kept),
        quarantined=kb.quarantined + tuple(dropped),
        version=kb.version + 1,
    )
    report = DanglingReport(
        lexical_entries=dangling_lexical,
        annotation_refs=dangling_annotations,
        assertions=tuple(dropped),
    )
    return new_kb, report


def validate(kb: KnowledgeBase) -> list:
    """Total integrity check; empty list iff every invariant holds."""
    out = []
    for c in kb.concepts.values():
        for pid in c.parents:
            parent = kb.concepts.get(pid)
            if parent is None:
                out.append(Violation("UnknownParent", c.id, f"parent {pid} missing"))
            elif parent.layer not in _ALLOWED_PARENT_LAYERS[c.layer]:
                out.append(
                    Violation("LayerViolation", c.id, f"parent {pid} in {parent.layer.value}")
                )
    # Cycle detection over the subclass graph (edges into missing nodes skipped).
    color = {}

    def visit(cid: str) -> bool:
        color[cid] = 1
        for pid in kb.concepts[cid].parents:
            if pid not in kb.concepts:
                continue
            st = color.get(pid, 0)
            if st == 1 or (st == 0 and visit(pid)):
                return True
        color[cid] = 2
        return False

    for cid in kb.concepts:
        if color.get(cid, 0) == 0 and visit(cid):
            out.append(Violation("CycleDetected", cid, "subclass cycle through concept"))
    for p in kb.properties.values():
        if p.domain_concept not in kb.concepts:
            out.append(Violation("UnknownId", p.id, f"domain {p.domain_concept} missing"))
        if p.range not in DATATYPES and p.range not in kb.concepts:
            out.append(Violation("UnknownId", p.id, f"range {p.range} missing"))
    for ind in kb.individuals.values():
        if not ind.types:
            out.append(Violation("EmptyTypes", ind.id, "individual has no types"))
        for tid in ind.types:
            c = kb.concepts.get(tid)
            if c is None:
                out.append(Violation("UnknownId", ind.id, f"type {tid} missing"))
            elif c.layer not in _ALLOWED_TYPE_LAYERS[ind.layer]:
                out.append(
                    Violation("LayerViolation", ind.id, f"typed by {c.layer.value} concept {tid}")
                )
    for i, a in enumerate(kb.assertions):
        aid = f"assertion[{i}]"
        subject = kb.individuals.get(a.subject)
        prop = kb.properties.get(a.property)
        if subject is None:
            out.append(Violation("UnknownId", aid, f"subject {a.subject} missing"))
            continue
        if prop is None:
            out.append(Violation("UnknownId", aid, f"property {a.property} missing"))
            continue
        if prop.domain_concept in kb.concepts:
            dom = descendants(kb, prop.domain_concept)
            if not dom.intersection(subject.types):
                out.append(Violation("DomainViolation", aid, f"subject {a.subject} off-domain"))
        if prop.range in DATATYPES:
            if not isinstance(a.object, Literal) or not _check_literal(a.object, prop.range):
                out.append(Violation("RangeViolation", aid, f"expected {prop.range} literal"))
        elif isinstance(a.object, Literal):
            out.append(Violation("RangeViolation", aid, "expected an individual object"))
        elif a.object not in kb.individuals:
            out.append(Violation("UnknownId", aid, f"object {a.object} missing"))
    return out


# ---------------------------------------------------------------------------
# Layer-document serialization (one JSON document per layer, sorted keys)


def _property_layer(kb: KnowledgeBase, p: PropertyDef) -> Layer:
    c = kb.concepts.get(p.domain_concept)
    return c.layer if c is not None else Layer.DOMAIN


def _assertion_layer(kb: KnowledgeBase, a: Assertion) -> Layer:
    ind = kb.individuals.get(a.subject)
    return ind.layer if ind is not None else Layer.DOMAIN


def object_to_json(obj: Union[str, Literal]) -> dict:
    if isinstance(obj, Literal):
        return {"literal": obj.value, "datatype": obj.datatype}
    return {"id": obj}


def object_from_json(doc: dict) -> Union[str, Literal]:
    if "literal" in doc:
        return Literal(value=doc["literal"], datatype=doc["datatype"])
    return doc["id"]


def layer_to_doc(kb: KnowledgeBase, layer: Layer) -> dict:
    return {
        "layer": layer.value,
        "concepts": [
            {"id": c.id, "label": c.label, "parents": sorted(c.parents)}
            for c in sorted(kb.concepts.values(), key=lambda c: c.id)
            if c.layer is layer
        ],
        "properties": [
            {"id": p.id, "domain": p.domain_concept, "range": p.range}
            for p in sorted(kb.properties.values(), key=lambda p: p.id)
            if _property_layer(kb, p) is layer
        ],
        "individuals": [
            {"id": i.id, "label": i.label, "types": list(i.types)}
            for i in sorted(kb.individuals.values(), key=lambda i: i.id)
            if i.layer is layer
        ],
        "assertions": sorted(
            (
                {"subject": a.subject, "property": a.property, "object": object_to_json(a.object)}
                for a in kb.assertions
                if _assertion_layer(kb, a) is layer
            ),
            key=lambda d: json.dumps(d, sort_keys=True),
        ),
    }


def layer_to_json(kb: KnowledgeBase, layer: Layer) -> str:
    return json.dumps(layer_to_doc(kb, layer), sort_keys=True, ensure_ascii=False, indent=1)


def load_layer_doc(kb: KnowledgeBase, doc: dict, include_assertions: bool = True) -> KnowledgeBase:
    """Merge one layer document into kb. Concepts are inserted before subclass
    edges so intra-layer ordering in the file does not matter. Assertions can
    be deferred (include_assertions=False) when they reference individuals in
    layers not yet loaded; load them afterwards with load_layer_assertions."""
    layer = Layer(doc["layer"])
    for c in doc.get("concepts", ()):
        kb = add_concept(kb, Concept(id=c["id"], label=c["label"], layer=layer))
    for c in doc.get("concepts", ()):
        for pid in c.get("parents", ()):
            kb = add_subclass_axiom(kb, c["id"], pid)
    for p in doc.get("properties", ()):
        kb = add_property(kb, PropertyDef(id=p["id"], domain_concept=p["domain"], range=p["range"]))
    for i in doc.get("individuals", ()):
        kb = add_individual(
            kb, Individual(id=i["id"], label=i["label"], layer=layer, types=tuple(i["types"]))
        )
    if include_assertions:
        kb = load_layer_assertions(kb, doc)
    return kb


def load_layer_assertions(kb: KnowledgeBase, doc: dict) -> KnowledgeBase:
    for a in doc.get("assertions", ()):
        kb = assert_relation(
            kb,
            Assertion(
                subject=a["subject"],
                property=a["property"],
                object=object_from_json(a["object"]),
            ),
        )
    return kb

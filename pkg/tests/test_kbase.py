import json
import random

import pytest

from ontorec import kbase
from ontorec.kbase import (
    Assertion,
    Concept,
    CycleDetected,
    DomainViolation,
    DuplicateId,
    Individual,
    InvalidDomainLayer,
    KnowledgeBase,
    Layer,
    LayerViolation,
    Literal,
    PropertyDef,
    RangeViolation,
    UnknownId,
    UnknownParent,
)


def concept(cid, layer=Layer.DOMAIN, *parents):
    return Concept(id=cid, label=cid.split(":")[-1], layer=layer, parents=frozenset(parents))


def bfs_up_oracle(edges, start):
    """Independent reachability oracle over a plain edge list (child, parent)."""
    reach = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for c, p in edges:
                if c == node and p not in reach:
                    reach.add(p)
                    nxt.append(p)
        frontier = nxt
    return reach


class TestAddConcept:
    def test_insert_with_parent(self, kb):
        before = kb.version
        kb2 = kbase.add_concept(
            kb, concept("domain:MergerEvent", Layer.DOMAIN, "domain:EconomicEvent")
        )
        assert "domain:MergerEvent" in kb2.concepts
        assert kb2.version == before + 1
        assert "domain:MergerEvent" not in kb.concepts  # input untouched

    def test_duplicate(self, kb):
        with pytest.raises(DuplicateId):
            kbase.add_concept(kb, concept("domain:Company"))

    def test_unknown_parent(self, kb):
        with pytest.raises(UnknownParent):
            kbase.add_concept(kb, concept("domain:X", Layer.DOMAIN, "missing"))

    def test_layer_violation(self, kb):
        with pytest.raises(LayerViolation):
            kbase.add_concept(kb, concept("upper:X", Layer.UPPER, "domain:Company"))


class TestSubclassAxiom:
    def test_edge_added(self, kb):
        kb = kbase.add_concept(kb, concept("domain:Fusion"))
        kb = kbase.add_subclass_axiom(kb, "domain:Fusion", "domain:EconomicEvent")
        assert "domain:EconomicEvent" in kbase.ancestors(kb, "domain:Fusion")

    def test_self_loop(self, kb):
        with pytest.raises(CycleDetected):
            kbase.add_subclass_axiom(kb, "domain:Company", "domain:Company")

    def test_unknown_id(self, kb):
        with pytest.raises(UnknownId):
            kbase.add_subclass_axiom(kb, "domain:Company", "domain:nope")

    def test_chain_cycle_rejected(self):
        kb = KnowledgeBase()
        for cid in ("domain:A", "domain:B", "domain:C"):
            kb = kbase.add_concept(kb, concept(cid))
        kb = kbase.add_subclass_axiom(kb, "domain:A", "domain:B")
        kb = kbase.add_subclass_axiom(kb, "domain:B", "domain:C")
        with pytest.raises(CycleDetected):
            kbase.add_subclass_axiom(kb, "domain:C", "domain:A")

    def test_random_cycle_attempts_match_reachability_oracle(self):
        rng = random.Random(7)
        kb = KnowledgeBase()
        n = 40
        ids = [f"domain:c{i}" for i in range(n)]
        for cid in ids:
            kb = kbase.add_concept(kb, concept(cid))
        edges = []
        for _ in range(300):
            a, b = rng.choice(ids), rng.choice(ids)
            # Edge a <= b is cyclic iff a is reachable from b via existing edges.
            expect_cycle = a in bfs_up_oracle(edges, b)
            try:
                kb = kbase.add_subclass_axiom(kb, a, b)
                assert not expect_cycle
                edges.append((a, b))
            except CycleDetected:
                assert expect_cycle


def random_dag(rng, n_nodes=60, n_edges=120):
    kb = KnowledgeBase()
    ids = [f"domain:n{i}" for i in range(n_nodes)]
    for cid in ids:
        kb = kbase.add_concept(kb, concept(cid))
    edges = []
    tries = 0
    while len(edges) < n_edges and tries < n_edges * 10:
        tries += 1
        # Edges only from higher to lower index keeps the graph acyclic.
        i, j = rng.sample(range(n_nodes), 2)
        if i < j:
            i, j = j, i
        try:
            kb = kbase.add_subclass_axiom(kb, ids[i], ids[j])
            edges.append((ids[i], ids[j]))
        except CycleDetected:  # pragma: no cover - construction guarantees acyclic
            pass
    return kb, ids, edges


class TestAncestors:
    def test_transitive_chain(self):
        kb = KnowledgeBase()
        for cid in ("domain:A", "domain:B", "domain:C"):
            kb = kbase.add_concept(kb, concept(cid))
        kb = kbase.add_subclass_axiom(kb, "domain:A", "domain:B")
        kb = kbase.add_subclass_axiom(kb, "domain:B", "domain:C")
        assert kbase.ancestors(kb, "domain:A") == {"domain:A", "domain:B", "domain:C"}

    def test_root_reflexive(self, kb):
        assert kbase.ancestors(kb, "upper:Entity") == {"upper:Entity"}

    def test_unknown(self, kb):
        with pytest.raises(UnknownId):
            kbase.ancestors(kb, "domain:ghost")

    def test_random_dag_matches_bfs_oracle(self):
        rng = random.Random(11)
        for _ in range(5):
            kb, ids, edges = random_dag(rng, n_nodes=50, n_edges=100)
            for cid in ids:
                assert kbase.ancestors(kb, cid) == bfs_up_oracle(edges, cid)

    def test_reflexive_and_transitive(self):
        rng = random.Random(3)
        kb, ids, _ = random_dag(rng, n_nodes=40, n_edges=80)
        anc = {cid: kbase.ancestors(kb, cid) for cid in ids}
        for cid in ids:
            assert cid in anc[cid]
            for b in anc[cid]:
                assert anc[b] <= anc[cid]


class TestInstancesOf:
    def test_inferred_includes_subtype_instances(self, kb):
        kb = kbase.add_individual(
            kb,
            Individual(
                id="domain:takeover-1",
                label="takeover 1",
                layer=Layer.DOMAIN,
                types=("domain:CompanyTakeover",),
            ),
        )
        assert "domain:takeover-1" in kbase.instances_of(kb, "domain:EconomicEvent", True)
        assert "domain:takeover-1" not in kbase.instances_of(kb, "domain:EconomicEvent", False)

    def test_random_typings_match_bruteforce(self):
        rng = random.Random(23)
        kb, ids, edges = random_dag(rng, n_nodes=30, n_edges=60)
        for i in range(40):
            types = tuple(rng.sample(ids, rng.randint(1, 3)))
            kb = kbase.add_individual(
                kb, Individual(id=f"domain:i{i}", label=f"i{i}", layer=Layer.DOMAIN, types=types)
            )
        for cid in ids:
            down = {c for c in ids if cid in bfs_up_oracle(edges, c)}
            expected = {
                ind.id for ind in kb.individuals.values() if down.intersection(ind.types)
            }
            assert kbase.instances_of(kb, cid, inferred=True) == expected

    def test_monotonicity(self, kb):
        for cid in kb.concepts:
            direct = kbase.instances_of(kb, cid, False)
            inferred = kbase.instances_of(kb, cid, True)
            assert direct <= inferred


class TestAssertRelation:
    def test_well_typed(self, kb):
        kb2 = kbase.assert_relation(
            kb, Assertion("domain:fromagerie-delin", "domain:locatedIn", "domain:dijon")
        )
        assert len(kb2.assertions) == len(kb.assertions) + 1
        assert kb2.version == kb.version + 1

    def test_domain_violation(self, kb):
        with pytest.raises(DomainViolation):
            kbase.assert_relation(
                kb, Assertion("domain:dijon", "domain:operatesIn", "domain:AgriFoodSector")
            )

    def test_range_datatype_violation(self, kb):
        with pytest.raises(RangeViolation):
            kbase.assert_relation(
                kb,
                Assertion(
                    "domain:fromagerie-delin",
                    "domain:foundedOn",
                    Literal("not a date", "string"),
                ),
            )

    def test_date_literal_accepted(self, kb):
        kb2 = kbase.assert_relation(
            kb,
            Assertion("domain:fromagerie-delin", "domain:foundedOn", Literal("1998-04-01", "date")),
        )
        assert kb2.assertions[-1].object.value == "1998-04-01"


def small_domain_layer(kb):
    return kbase.DomainLayer(
        concepts=tuple(c for c in kb.concepts.values() if c.layer is Layer.DOMAIN),
        properties=tuple(
            p
            for p in kb.properties.values()
            if kb.concepts[p.domain_concept].layer is Layer.DOMAIN
        ),
        individuals=tuple(i for i in kb.individuals.values() if i.layer is Layer.DOMAIN),
    )


class TestSwapDomain:
    def test_identity_swap(self, kb):
        non_domain_before = [
            kbase.layer_to_json(kb, layer)
            for layer in (Layer.UPPER, Layer.LEXICAL, Layer.CORPUS)
        ]
        kb2, report = kbase.swap_domain_ontology(kb, small_domain_layer(kb))
        assert report.empty
        non_domain_after = [
            kbase.layer_to_json(kb2, layer)
            for layer in (Layer.UPPER, Layer.LEXICAL, Layer.CORPUS)
        ]
        assert non_domain_before == non_domain_after
        assert kbase.layer_to_json(kb, Layer.DOMAIN) == kbase.layer_to_json(kb2, Layer.DOMAIN)

    def test_removed_concept_flags_annotation(self, kb):
        from ontorec.extract import Annotation

        ann = Annotation(doc_id="a1", start=0, end=5, concept="domain:Bank")
        keep = Annotation(doc_id="a1", start=10, end=15, concept="domain:City")
        layer = small_domain_layer(kb)
        # Drop the Bank concept and everything referencing it.
        layer = kbase.DomainLayer(
            concepts=tuple(c for c in layer.concepts if c.id != "domain:Bank"),
            properties=layer.properties,
            individuals=tuple(
                i for i in layer.individuals if "domain:Bank" not in i.types
            ),
        )
        # Set-difference oracle: referenced ids minus surviving ids.
        surviving = (
            {c.id for c in layer.concepts}
            | {p.id for p in layer.properties}
            | {i.id for i in layer.individuals}
            | {cid for cid, c in kb.concepts.items() if c.layer is not Layer.DOMAIN}
            | {iid for iid, i in kb.individuals.items() if i.layer is not Layer.DOMAIN}
        )
        expected = tuple(a.id for a in (ann, keep) if a.concept not in surviving)
        kb2, report = kbase.swap_domain_ontology(kb, layer, annotations=[ann, keep])
        assert report.annotation_refs == expected == (ann.id,)

    def test_dangling_assertion_quarantined(self, kb):
        layer = small_domain_layer(kb)
        layer = kbase.DomainLayer(
            concepts=layer.concepts,
            properties=layer.properties,
            individuals=tuple(i for i in layer.individuals if i.id != "domain:dijon"),
        )
        kb2, report = kbase.swap_domain_ontology(kb, layer)
        assert any(a.object == "domain:dijon" for a in report.assertions)
        assert kbase.validate(kb2) == []
        # Quarantined, not deleted.
        assert report.assertions[0] in kb2.quarantined

    def test_upper_layer_untouched_under_any_swap(self, kb):
        upper_before = kbase.layer_to_json(kb, Layer.UPPER)
        replacement = kbase.DomainLayer(
            concepts=(concept("domain:OnlyOne", Layer.DOMAIN, "upper:Event"),)
        )
        kb2, _ = kbase.swap_domain_ontology(kb, replacement)
        assert kbase.layer_to_json(kb2, Layer.UPPER) == upper_before
        assert set(c.id for c in kb2.concepts.values() if c.layer is Layer.DOMAIN) == {
            "domain:OnlyOne"
        }

    def test_invalid_domain_rejected(self, kb):
        bad = kbase.DomainLayer(
            concepts=(
                concept("domain:A", Layer.DOMAIN, "domain:B"),
                concept("domain:B", Layer.DOMAIN, "domain:A"),
            )
        )
        with pytest.raises(InvalidDomainLayer):
            kbase.swap_domain_ontology(kb, bad)


class TestValidate:
    def test_clean_kb(self, kb):
        assert kbase.validate(kb) == []

    def test_dangling_parent(self, kb):
        concepts = dict(kb.concepts)
        c = concepts["domain:PlantOpening"]
        concepts["domain:PlantOpening"] = kbase.replace(c, parents=frozenset({"domain:ghost"}))
        broken = kbase.replace(kb, concepts=concepts)
        violations = kbase.validate(broken)
        assert [v.rule for v in violations] == ["UnknownParent"]
        assert violations[0].offending_id == "domain:PlantOpening"

    def test_injected_defects_counted(self, kb):
        rng = random.Random(5)
        # Each injection produces exactly one violation with a known id.
        concepts = dict(kb.concepts)
        individuals = dict(kb.individuals)
        expected = set()
        for i in range(3):
            cid = f"domain:bad-parent-{i}"
            concepts[cid] = Concept(
                id=cid, label=cid, layer=Layer.DOMAIN, parents=frozenset({f"domain:ghost{i}"})
            )
            expected.add(cid)
        for i in range(2):
            iid = f"domain:bad-type-{i}"
            individuals[iid] = Individual(
                id=iid, label=iid, layer=Layer.DOMAIN, types=(f"domain:ghost{i}",)
            )
            expected.add(iid)
        broken = kbase.replace(kb, concepts=concepts, individuals=individuals)
        violations = kbase.validate(broken)
        assert len(violations) == 5
        assert {v.offending_id for v in violations} == expected


class TestSerialization:
    def test_roundtrip(self, kb):
        rebuilt = KnowledgeBase()
        docs = [
            json.loads(kbase.layer_to_json(kb, layer))
            for layer in (Layer.UPPER, Layer.DOMAIN, Layer.LEXICAL, Layer.CORPUS)
        ]
        for doc in docs:
            rebuilt = kbase.load_layer_doc(rebuilt, doc, include_assertions=False)
        for doc in docs:
            rebuilt = kbase.load_layer_assertions(rebuilt, doc)
        for layer in Layer:
            assert kbase.layer_to_json(rebuilt, layer) == kbase.layer_to_json(kb, layer)

    def test_deterministic_output(self, kb):
        assert kbase.layer_to_json(kb, Layer.DOMAIN) == kbase.layer_to_json(kb, Layer.DOMAIN)

    def test_mutation_atomicity(self, kb):
        snapshot = {layer: kbase.layer_to_json(kb, layer) for layer in Layer}
        with pytest.raises(UnknownParent):
            kbase.add_concept(kb, concept("domain:X", Layer.DOMAIN, "missing"))
        with pytest.raises(CycleDetected):
            kbase.add_subclass_axiom(kb, "domain:Company", "domain:Company")
        for layer in Layer:
            assert kbase.layer_to_json(kb, layer) == snapshot[layer]
        assert kbase.validate(kb) == []

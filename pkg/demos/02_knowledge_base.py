"""
The four-layer knowledge base
=============================

Shows the layer partition (upper / domain / lexical / corpus), subsumption
queries, inferred instance retrieval, total validation, and a domain-layer
swap with its dangling-reference report.
"""

from ontorec import kbase
from ontorec.kbase import DomainLayer, Layer
from ontorec.sample import build_sample_kb

kb = build_sample_kb()

print("concepts per layer:")
for layer in Layer:
    ids = [c.id for c in kb.concepts.values() if c.layer is layer]
    print(f"  {layer.value:8} {len(ids):2d}  e.g. {ids[:3]}")

# Ancestors are reflexive-transitive: a bank is a company, an organization,
# an agent, an entity.
print("\nancestors of domain:Bank:")
print(" ", sorted(kbase.ancestors(kb, "domain:Bank")))

# Direct retrieval sees only individuals typed exactly with the concept;
# inferred retrieval walks the hierarchy down.
print("\ninstances of domain:Organization (direct):",
      sorted(kbase.instances_of(kb, "domain:Organization", inferred=False)))
print("instances of domain:Organization (inferred):",
      sorted(kbase.instances_of(kb, "domain:Organization", inferred=True)))

print("\nvalidate:", kbase.validate(kb) or "no violations")

# Swap the domain layer for one without the Bank branch. Nothing is deleted
# silently: the report lists every lexicon surface and assertion left
# dangling, and dangling assertions are quarantined, not dropped.
smaller = DomainLayer(
    concepts=tuple(c for c in kb.concepts.values()
                   if c.layer is Layer.DOMAIN and c.id != "domain:Bank"),
    properties=tuple(kb.properties.values()),
    individuals=tuple(i for i in kb.individuals.values()
                      if "domain:Bank" not in i.types),
)
kb2, report = kbase.swap_domain_ontology(kb, smaller)
print("\nafter swap:")
print("  dangling assertions:",
      [(a.subject, a.property, a.object) for a in report.assertions])
print("  quarantined:", len(kb2.quarantined))
print("  validate:", kbase.validate(kb2) or "no violations")

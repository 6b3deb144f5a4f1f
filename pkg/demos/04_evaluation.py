"""
Concept matching vs. keyword matching
=====================================

The motivating contrast: synonyms ("rachat" / "reprise") share no words but
name the same concept, and an ambiguous word ("Bourgogne" the region vs.
"Banque de Bourgogne" the bank) pollutes keyword retrieval while the longest
gazetteer match keeps the concept side clean.
"""

import tempfile

from ontorec import sample
from ontorec.evaluate import EvalPair, eval_baseline
from ontorec.extract import Document
from ontorec.store import Store

store = Store.create(tempfile.mkdtemp(prefix="ontorec-eval-"),
                     sample.build_sample_kb(), sample.sample_lexicon(),
                     sample.sample_rules())

corpus = {
    "syn-001": "Rachat de la fromagerie par un groupe local",
    "syn-002": "Reprise de la boulangerie du centre",
    "syn-003": "Faillite de la banque mutualiste",
    "pol-001": "La Bourgogne attire les investisseurs",
    "pol-002": "La Banque de Bourgogne augmente son capital",
    "pad-001": "Le tramway de Dijon avance",
}
for doc_id, body in sorted(corpus.items()):
    store.ingest(Document(doc_id, "", body, "2011-02-01"))

pairs = [
    EvalPair(id="takeovers", seeds=("domain:CompanyTakeover",),
             query_text="rachat", relevant=frozenset({"syn-001", "syn-002"}), k=2),
    EvalPair(id="region", seeds=("domain:Region",),
             query_text="Bourgogne", relevant=frozenset({"pol-001"}), k=2),
]

report = eval_baseline(store, pairs)
for pid, systems in report.per_pair.items():
    print(f"{pid}:")
    for system, r in systems.items():
        print(f"  {system:8} retrieved={r.retrieved}  P@k={r.precision:.2f}"
              f"  R@k={r.recall:.2f}")

print("\nmean recall:", {s: round(v, 3) for s, v in report.mean_recall.items()})
print("mean precision:", {s: round(v, 3) for s, v in report.mean_precision.items()})

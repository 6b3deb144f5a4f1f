"""
The daily review loop
=====================

Creates a store on disk, ingests a week of articles, subscribes a user to a
few concepts, prints their daily review, then records feedback and shows how
the ranking moves. Also shows a new-entity alert firing.
"""

import tempfile

from ontorec import sample
from ontorec.extract import Document
from ontorec.profile import EXPLICIT, FeedbackEvent
from ontorec.store import Store

root = tempfile.mkdtemp(prefix="ontorec-demo-")
store = Store.create(root, sample.build_sample_kb(), sample.sample_lexicon(),
                     sample.sample_rules())
print("store at", root)

articles = [
    ("art-001", "La Banque de Bourgogne s'agrandit", "2011-01-11"),
    ("art-002", "Rachat de la Fromagerie Delin à Dijon", "2011-01-12"),
    ("art-003", "Le tramway de Dijon progresse", "2011-01-12"),
    ("art-004", "Faillite d'une fromagerie en Bourgogne", "2011-01-12"),
    ("art-005", "La société Linpac SARL ouvre une nouvelle usine", "2011-01-12"),
]
for doc_id, body, date in articles:
    report = store.ingest(Document(doc_id, body.split(" ")[0], body, date))
    print(f"ingested {doc_id}: {report.annotations} annotations,"
          f" new individuals {report.new_individuals or '-'}")

# The user subscribes by concept, not by keyword: economic events and the
# agri-food sector.
store.create_profile("alice", ["domain:EconomicEvent", "domain:AgriFoodSector"])

print("\nreview for 2011-01-12:")
for doc_id, score in store.review("alice", "2011-01-12").items:
    print(f"  {score:.3f}  {doc_id}  {store.articles[doc_id].body}")

# Alice upvotes the takeover story; her profile shifts toward its concepts
# and the next review reflects it.
store.record_feedback(FeedbackEvent("alice", "art-002", EXPLICIT, rating=1,
                                    timestamp="2011-01-12T18:00:00"))
print("\nafter a +1 on art-002:")
for doc_id, score in store.review("alice", "2011-01-12").items:
    print(f"  {score:.3f}  {doc_id}")

print("\nprofile weights:")
for cid, w in sorted(store.get_profile("alice").vector.items(), key=lambda t: -t[1]):
    print(f"  {w:.3f}  {cid}")

# art-005 introduced a brand-new company; anyone whose profile weights
# companies (or an ancestor concept) gets an alert, exactly once.
store.create_profile("bob", ["domain:Company"])
store.ingest(Document("art-006", "", "Transports Martin SNC est créée à Dijon",
                      "2011-01-13"))
for alert in store.user_alerts("bob"):
    print(f"\nalert for bob: {alert.individual_id} ({alert.concept})"
          f" via {alert.triggering_article_id}")

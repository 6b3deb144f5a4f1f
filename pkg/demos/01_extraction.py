"""
Extracting concepts and entities from a news article
====================================================

Walks one French article through the extraction pipeline: tokenization,
gazetteer lookup against the lexicon, finite-state patterns (dates,
company names), overlap resolution and ontology population.
"""

from ontorec import sample
from ontorec.extract import Document, annotate, populate, tokenize

kb = sample.build_sample_kb()
lexicon = sample.sample_lexicon()
rules = sample.sample_rules()

doc = Document(
    id="art-001",
    title="Rachat en Côte-d'Or",
    body="La société Nexidia SARL annonce le rachat de la Banque de Bourgogne "
         "le 12 janvier 2011 à Dijon.",
    published_date="2011-01-12",
)

# Tokens are letter runs (apostrophes included), digit runs, and single
# punctuation or symbol characters.
print("tokens:")
print(" ", [t.text for t in tokenize(doc.body)][:12], "...")

# The annotator runs the gazetteer and the pattern rules over title + body,
# then resolves overlaps (longest span first, then individual-bearing, then
# rule priority).
annotations = annotate(doc, kb, lexicon, rules)
print("\nannotations:")
for a in annotations:
    extra = a.individual or a.normalized_value or ""
    print(f"  [{a.start:3d},{a.end:3d}) {a.surface!r:28} -> {a.concept} {extra}")

# "Nexidia SARL" matched a pattern flagged createIndividual: population adds
# it to the domain layer and extends the lexicon so the next article finds it
# by plain gazetteer lookup.
result = populate(kb, annotations)
print("\nnew individuals:", result.new_individuals)
print("new lexicon entries:", [e.surface for e in result.new_entries])

doc2 = Document("art-002", "", "Nexidia SARL récidive.", "2011-01-13")
for a in annotate(doc2, result.kb, lexicon + result.new_entries, rules):
    print(f"next article: {a.surface!r} -> {a.individual} via {a.source}")

"""A small economic-news knowledge base, lexicon and rule set, used by the
demo scripts, the CLI `init` command and the test fixtures.

The upper layer carries domain-transcending concepts (entities, events,
places, time); the domain layer covers regional economic news: event types,
sectors, transverse projects, companies and locations.
"""

from __future__ import annotations

from . import kbase
from .extract import FRENCH_DATE_RULE, LexicalEntry, PatternRule
from .kbase import Concept, Individual, KnowledgeBase, Layer, PropertyDef


def build_sample_kb() -> KnowledgeBase:
    kb = KnowledgeBase()

    def concept(cid, label, layer, *parents):
        nonlocal kb
        kb = kbase.add_concept(
            kb, Concept(id=cid, label=label, layer=layer, parents=frozenset(parents))
        )

    # Upper layer
    concept("upper:Entity", "Entity", Layer.UPPER)
    concept("upper:Event", "Event", Layer.UPPER)
    concept("upper:Agent", "Agent", Layer.UPPER, "upper:Entity")
    concept("upper:Place", "Place", Layer.UPPER, "upper:Entity")
    concept("upper:Temporal", "Temporal expression", Layer.UPPER)

    # Domain layer: events, sectors, projects, organizations, locations
    concept("domain:EconomicEvent", "Economic event", Layer.DOMAIN, "upper:Event")
    concept("domain:CompanyTakeover", "Company takeover", Layer.DOMAIN, "domain:EconomicEvent")
    concept("domain:PlantOpening", "Plant opening", Layer.DOMAIN, "domain:EconomicEvent")
    concept("domain:Bankruptcy", "Bankruptcy", Layer.DOMAIN, "domain:EconomicEvent")
    concept("domain:EconomicSector", "Economic sector", Layer.DOMAIN, "upper:Entity")
    concept("domain:BankingSector", "Banking", Layer.DOMAIN, "domain:EconomicSector")
    concept("domain:AgriFoodSector", "Agri-food", Layer.DOMAIN, "domain:EconomicSector")
    concept("domain:TransverseProject", "Transverse project", Layer.DOMAIN, "upper:Entity")
    concept("domain:Organization", "Organization", Layer.DOMAIN, "upper:Agent")
    concept("domain:Company", "Company", Layer.DOMAIN, "domain:Organization")
    concept("domain:Bank", "Bank", Layer.DOMAIN, "domain:Company")
    concept("domain:Location", "Location", Layer.DOMAIN, "upper:Place")
    concept("domain:City", "City", Layer.DOMAIN, "domain:Location")
    concept("domain:Region", "Region", Layer.DOMAIN, "domain:Location")

    # Lexical and corpus layers
    concept("lexical:Surface", "Surface form", Layer.LEXICAL)
    concept("corpus:Article", "Press article", Layer.CORPUS)

    kb = kbase.add_property(
        kb, PropertyDef(id="domain:locatedIn", domain_concept="domain:Organization",
                        range="domain:Location"),
    )
    kb = kbase.add_property(
        kb, PropertyDef(id="domain:operatesIn", domain_concept="domain:Company",
                        range="domain:EconomicSector"),
    )
    kb = kbase.add_property(
        kb, PropertyDef(id="domain:foundedOn", domain_concept="domain:Organization",
                        range="date"),
    )

    def individual(iid, label, *types):
        nonlocal kb
        kb = kbase.add_individual(
            kb, Individual(id=iid, label=label, layer=Layer.DOMAIN, types=tuple(types))
        )

    individual("domain:agrifood", "Agri-food sector", "domain:AgriFoodSector")
    individual("domain:banking", "Banking sector", "domain:BankingSector")
    individual("domain:dijon", "Dijon", "domain:City")
    individual("domain:bourgogne", "Bourgogne", "domain:Region")
    individual("domain:banque-de-bourgogne", "Banque de Bourgogne", "domain:Bank")
    individual("domain:fromagerie-delin", "Fromagerie Delin", "domain:Company")
    individual("domain:tramway-dijon", "Tramway de Dijon", "domain:TransverseProject")

    kb = kbase.assert_relation(
        kb, kbase.Assertion("domain:banque-de-bourgogne", "domain:locatedIn", "domain:dijon")
    )
    kb = kbase.assert_relation(
        kb,
        kbase.Assertion("domain:fromagerie-delin", "domain:operatesIn", "domain:agrifood"),
    )
    return kb


def sample_lexicon() -> list:
    return [
        LexicalEntry(surface="Banque de Bourgogne", target="domain:banque-de-bourgogne"),
        LexicalEntry(surface="Fromagerie Delin", target="domain:fromagerie-delin"),
        LexicalEntry(surface="Dijon", target="domain:dijon"),
        LexicalEntry(surface="Bourgogne", target="domain:bourgogne"),
        LexicalEntry(surface="tramway de Dijon", target="domain:tramway-dijon"),
        LexicalEntry(surface="banque", target="domain:Bank"),
        LexicalEntry(surface="rachat", target="domain:CompanyTakeover"),
        LexicalEntry(surface="reprise", target="domain:CompanyTakeover"),
        LexicalEntry(surface="faillite", target="domain:Bankruptcy"),
        LexicalEntry(surface="liquidation judiciaire", target="domain:Bankruptcy"),
        LexicalEntry(surface="nouvelle usine", target="domain:PlantOpening"),
        LexicalEntry(surface="fromagerie", target="domain:AgriFoodSector"),
    ]


COMPANY_SUFFIX_RULE = PatternRule(
    name="company-suffix",
    priority=5,
    pattern=(
        {"regex": r"[A-ZÀ-Ý][\w'’-]*"},
        {"optional": ({"regex": r"[A-ZÀ-Ý][\w'’-]*"},)},
        {"regex": r"SARL|SA|SAS|SNC"},
    ),
    concept="domain:Company",
    create_individual=True,
)


def sample_rules() -> list:
    return [FRENCH_DATE_RULE, COMPANY_SUFFIX_RULE]

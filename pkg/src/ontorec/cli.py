"""Command-line front end over a store directory.

    ontorec --store DIR init [--sample]
    ontorec --store DIR ingest article.json [...]
    ontorec --store DIR annotate article.json        (dry run, prints annotations)
    ontorec --store DIR user USER seed1 [seed2 ...]
    ontorec --store DIR recommend USER DATE
    ontorec --store DIR feedback USER ARTICLE SIGNAL (opened|readLong|skipped|+1|-1)
    ontorec --store DIR serve
    ontorec --store DIR eval spec.json
    ontorec --store DIR ontology validate
    ontorec --store DIR ontology swap domain.json

The store directory defaults to the ONTOREC_STORE environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import evaluate, extract, kbase, recommend, sample
from .kbase import Layer
from .profile import EXPLICIT, IMPLICIT, FeedbackEvent
from .store import Store


def _load_store(args) -> Store:
    if not args.store:
        sys.exit("no store directory: pass --store or set ONTOREC_STORE")
    return Store.load(args.store)


def _read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _print(obj) -> None:
    print(json.dumps(obj, ensure_ascii=False, indent=2))


def cmd_init(args) -> None:
    if args.sample:
        Store.create(args.store, sample.build_sample_kb(), sample.sample_lexicon(),
                     sample.sample_rules())
    else:
        Store.create(args.store, kbase.KnowledgeBase())
    print(f"initialized store at {args.store}")


def cmd_ingest(args) -> None:
    store = _load_store(args)
    for path in args.files:
        doc = extract.document_from_json(_read_json(path))
        report = store.ingest(doc)
        _print(report.to_json())


def cmd_annotate(args) -> None:
    store = _load_store(args)
    doc = extract.document_from_json(_read_json(args.file))
    anns = extract.annotate(doc, store.kb, store.lexicon, store.rules)
    for a in anns:
        print(json.dumps(extract.annotation_to_json(a), ensure_ascii=False))


def cmd_user(args) -> None:
    store = _load_store(args)
    p = store.create_profile(args.user, args.seeds)
    _print({"userId": p.user_id, "seeds": sorted(p.seeds)})


def cmd_recommend(args) -> None:
    store = _load_store(args)
    review = store.review(args.user, args.date)
    titles = {d.id: d.title for d in store.articles.values()}
    _print(recommend.review_to_json(review, titles))


def cmd_feedback(args) -> None:
    store = _load_store(args)
    if args.signal in ("+1", "-1"):
        event = FeedbackEvent(args.user, args.article, EXPLICIT, rating=int(args.signal))
    else:
        event = FeedbackEvent(args.user, args.article, IMPLICIT, signal=args.signal)
    p = store.record_feedback(event)
    _print({"userId": p.user_id, "vector": {t: p.vector[t] for t in sorted(p.vector)}})


def cmd_serve(args) -> None:
    import uvicorn

    from .api import create_app

    store = _load_store(args)
    host, _, port = store.config.bind.partition(":")
    uvicorn.run(create_app(store), host=host, port=int(port or 8742))


def cmd_eval(args) -> None:
    store = _load_store(args)
    pairs = evaluate.pairs_from_json(_read_json(args.spec))
    _print(evaluate.eval_baseline(store, pairs).to_json())


def cmd_ontology(args) -> None:
    store = _load_store(args)
    if args.action == "validate":
        violations = kbase.validate(store.kb)
        for v in violations:
            print(f"{v.rule}: {v.offending_id}: {v.message}")
        if violations:
            sys.exit(1)
        print("ok")
    else:  # swap
        doc = _read_json(args.file)
        staged = kbase.load_layer_doc(
            kbase.KnowledgeBase(
                concepts={
                    cid: c for cid, c in store.kb.concepts.items() if c.layer is Layer.UPPER
                }
            ),
            {**doc, "layer": "domain"},
        )
        new_domain = kbase.DomainLayer(
            concepts=tuple(c for c in staged.concepts.values() if c.layer is Layer.DOMAIN),
            properties=tuple(staged.properties.values()),
            individuals=tuple(staged.individuals.values()),
        )
        report = store.swap_domain(new_domain)
        _print(
            {
                "lexicalEntries": list(report.lexical_entries),
                "annotationRefs": list(report.annotation_refs),
                "assertions": len(report.assertions),
            }
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ontorec")
    parser.add_argument("--store", default=os.environ.get("ONTOREC_STORE"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="create a new store")
    p.add_argument("--sample", action="store_true", help="seed with the sample ontology")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("ingest", help="ingest article JSON files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("annotate", help="annotate an article without ingesting it")
    p.add_argument("file")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("user", help="create a user profile from seed concepts")
    p.add_argument("user")
    p.add_argument("seeds", nargs="+")
    p.set_defaults(func=cmd_user)

    p = sub.add_parser("recommend", help="print a user's review for a date")
    p.add_argument("user")
    p.add_argument("date")
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("feedback", help="record feedback for a user on an article")
    p.add_argument("user")
    p.add_argument("article")
    p.add_argument("signal", help="opened|readLong|skipped|+1|-1")
    p.set_defaults(func=cmd_feedback)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("eval", help="run the concept-vs-keyword evaluation")
    p.add_argument("spec")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("ontology", help="validate the kb or swap the domain layer")
    p.add_argument("action", choices=["validate", "swap"])
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_ontology)

    return parser


def main(argv=None) -> None:
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()

"""Command line front door.

Subcommands: analyze, translate, index, search, query, serve, demo,
eval, train.  Resource and corpus paths default to the shipped data.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .features import format_features
from .morphology import analyze_text
from .resources import default_data_dir, load_resources
from .search import (build_query, drop_stop_words, filter_answer, index_corpus,
                     load_documents, load_templates, number_hyperlinks, search)
from .session import SessionEngine
from .transfer import AnswerRenderer, translate_hi_to_en


def _load_bundle(args):
    return load_resources(args.resources)


def _lines(args) -> list[str]:
    if args.text:
        return [" ".join(args.text)]
    return [line.rstrip("\n") for line in sys.stdin if line.strip()]


def cmd_analyze(args) -> int:
    bundle = _load_bundle(args)
    tagger = bundle.tagger(args.lang)
    aux = bundle.source_lexicon.auxiliaries if args.lang == "hi" else {}
    for line in _lines(args):
        record = analyze_text(line, tagger, aux)
        parts = []
        for item in record.items:
            feats = format_features(item.features)
            parts.append(f"{item.surface}⟶{item.root}[{item.category}]{{{feats}}}")
        print(" ".join(parts))
    return 0


def cmd_translate(args) -> int:
    bundle = _load_bundle(args)
    for line in _lines(args):
        print(" ".join(translate_hi_to_en(line, bundle)))
    return 0


def cmd_index(args) -> int:
    docs = load_documents(args.corpus)
    index = index_corpus(docs)
    terms = sorted(index.postings)
    print(f"indexed {index.num_docs} documents, {len(terms)} terms")
    if args.dump:
        for term in terms:
            postings = " ".join(f"{p.doc_id}:{p.tf}" for p in index.postings[term])
            print(f"{term}\t{postings}")
    return 0


def cmd_search(args) -> int:
    bundle = _load_bundle(args)
    docs = load_documents(args.corpus)
    docs_by_id = {d.id: d for d in docs}
    index = index_corpus(docs)
    keywords = drop_stop_words(args.keywords, bundle.stopwords)
    query = build_query(keywords, args.keywords)
    if query is None:
        print("no keywords left after stop-word removal", file=sys.stderr)
        return 1
    for i, hit in enumerate(search(index, query, docs_by_id, k=args.k), start=1):
        print(f"{i}\t{hit.score:.4f}\t{hit.title}\t{hit.url}")
    return 0


def cmd_query(args) -> int:
    bundle = _load_bundle(args)
    docs = load_documents(args.corpus)
    docs_by_id = {d.id: d for d in docs}
    index = index_corpus(docs)
    renderer = AnswerRenderer(bundle, load_templates(args.templates))
    text = " ".join(args.text)
    english = translate_hi_to_en(text, bundle)
    print("english :", " ".join(english))
    keywords = drop_stop_words(english, bundle.stopwords)
    print("keywords:", " ".join(keywords))
    query = build_query(keywords, english)
    if query is None:
        print("no keywords; please rephrase the query", file=sys.stderr)
        return 1
    hits = search(index, query, docs_by_id, k=args.k)
    if not hits:
        print("no results")
        return 0
    for i, hit in enumerate(hits, start=1):
        print(f"  {i}. {hit.title}  ({hit.url}, score {hit.score:.3f})")
    answer = filter_answer(hits, docs_by_id, query, renderer)
    print("answer  :", answer.english_sentence)
    print("hindi   :", answer.hindi_rendering)
    for link in number_hyperlinks(docs_by_id[hits[0].doc_id]):
        print(f"  [{link.number}] {link.text} -> {link.href}")
    return 0


def _build_engine(args, with_audio: bool) -> SessionEngine:
    bundle = _load_bundle(args)
    docs = load_documents(args.corpus)
    templates = load_templates(args.templates)
    grammar = None
    if with_audio:
        words = sorted(bundle.pron.entries)
        if getattr(args, "models", None):
            from .hmm import load_model
            from .recognizer import build_grammar, compose_word_model
            phone_hmms = {p.stem: load_model(p) for p in Path(args.models).glob("*.hmm")}
            usable = [w for w in words
                      if all(u in phone_hmms for u in _units(bundle, w))]
            word_models = [compose_word_model(w, bundle.pron, phone_hmms, bundle.phones)
                           for w in usable]
            grammar = build_grammar(word_models, loop=True)
        else:
            from .simulate import build_tone_grammar
            print("no --models directory given; training tone-synthesis models "
                  "(synthetic bootstrap, text mode is unaffected)", file=sys.stderr)
            grammar = build_tone_grammar(bundle, words)
    return SessionEngine(bundle, docs, templates, grammar=grammar)


def _units(bundle, word):
    from .resources import pronounce
    return pronounce(word, bundle.pron, bundle.phones)


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    engine = _build_engine(args, with_audio=not args.no_audio)
    ui_dir = Path(args.ui) if args.ui else None
    app = create_app(engine, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_demo(args) -> int:
    engine = _build_engine(args, with_audio=False)
    session = engine.create_session()
    print("type a romanized Hindi query, a result number, 'y'/'n' at the")
    print("confirmation prompt, or 'quit'.")
    while True:
        try:
            line = input(f"[{session.state}] > ").strip()
        except EOFError:
            break
        if line in ("quit", "exit"):
            break
        if not line:
            continue
        try:
            if session.state == "recognized":
                if line.lower() in ("y", "yes", "haan"):
                    engine.confirm(session)
                elif line.lower() in ("n", "no", "nahi"):
                    engine.reject(session)
                else:
                    print("answer y or n")
                    continue
            elif line.isdigit() and session.state in ("results", "navigated"):
                engine.select_link(session, int(line))
            else:
                engine.submit_query(session, text=line)
        except Exception as exc:
            print(f"error: {exc}")
            continue
        snap = engine.snapshot(session)
        if snap["hypothesis"] and session.state == "recognized":
            print("recognized:", " ".join(snap["hypothesis"]["words"]), "(confirm? y/n)")
        if snap["message"]:
            print(snap["message"])
        if snap["answer"]:
            print("answer:", snap["answer"]["english"])
            print("hindi :", snap["answer"]["hindi"])
        if snap["links"]:
            for link in snap["links"]:
                print(f"  [{link['number']}] {link['text']} -> {link['href']}")
    return 0


def cmd_eval(args) -> int:
    from .evaluate import run_experiment
    bundle = _load_bundle(args)

    items = [(list(pair.english), list(pair.hindi)) for pair in bundle.corpus.pairs]

    def system(item, rng):
        _, hindi = item
        return translate_hi_to_en(" ".join(hindi), bundle)

    size = args.group_size or len(items)
    groups = []
    for start in range(0, len(items), size):
        indices = list(range(start, min(start + size, len(items))))
        groups.append((f"g{len(groups) + 1}", indices))
    report = run_experiment(items, system, groups, seed=args.seed)
    print(report.to_tsv())
    return 0


def cmd_train(args) -> int:
    from .hmm import save_model
    from .simulate import train_tone_models
    bundle = _load_bundle(args)
    words = sorted(bundle.pron.entries)
    models = train_tone_models(bundle, words, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for unit, model in models.items():
        save_model(model, out / f"{unit}.hmm")
    print(f"wrote {len(models)} phone models to {out}")
    return 0


def main(argv=None) -> int:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--resources", default=str(default_data_dir()),
                        help="resource directory (default: shipped data)")
    shared.add_argument("--corpus", default=str(default_data_dir() / "docs.jsonl"),
                        help="document corpus (docs.jsonl)")
    shared.add_argument("--templates", default=str(default_data_dir() / "templates.tsv"))
    parser = argparse.ArgumentParser(prog="bolkhoj",
                                     description="spoken-Hindi web search, desk scale")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[shared], help="morphological analysis, line in / line out")
    p.add_argument("--lang", choices=("hi", "en"), default="hi")
    p.add_argument("text", nargs="*")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("translate", parents=[shared], help="romanized Hindi to English tokens")
    p.add_argument("text", nargs="*")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("index", parents=[shared], help="build the inverted index")
    p.add_argument("--dump", action="store_true", help="print the postings")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", parents=[shared], help="keyword search against the local index")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("keywords", nargs="+")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("query", parents=[shared], help="full pipeline for one romanized Hindi query")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("text", nargs="+")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("serve", parents=[shared], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8040)
    p.add_argument("--models", help="directory of per-phone .hmm files for audio mode")
    p.add_argument("--ui", help="static directory to mount at /ui/")
    p.add_argument("--no-audio", action="store_true", help="text-only service")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("demo", parents=[shared], help="terminal REPL over the dialog loop")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("eval", parents=[shared], help="translation accuracy over the aligned corpus (TSV)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--group-size", type=int, default=0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("train", parents=[shared], help="train tone-synthesis phone models to .hmm files")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_train)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

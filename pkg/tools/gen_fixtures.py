#!/usr/bin/env python3
"""Regenerate the shipped resource fixtures under src/bolkhoj/data.

Everything is constructed programmatically and written through
save_resources so the files are in canonical form (the round-trip test
depends on that).  The aligned corpus English sides are produced by the
translation pipeline itself; alignments come from a first-unconsumed
exact-match pass over the transferred tokens.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from bolkhoj.features import parse_features
from bolkhoj.morphology import analyze_text
from bolkhoj.resources import (AlignedPair, BilingualLexicon, DirectEntry,
                               Irregular, ParadigmTable, PhoneSet, PronLexicon,
                               QueryCorpus, ResourceBundle, SourceLexicon,
                               StopWordList, SuffixRule, TransferRule,
                               load_resources, save_resources)
from bolkhoj.search import Document, Link, save_documents
from bolkhoj.transfer import realize_question, transfer_items

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "bolkhoj" / "data"


# ---------------------------------------------------------------------------
# phone set: 10 vowels + 8 consonants + 10 closures + 20 releases = 48

VOWELS = ["a", "aa", "i", "ii", "u", "uu", "e", "ai", "o", "ae"]
CONSONANTS = ["m", "n", "s", "h", "r", "l", "v", "y"]
# closure family -> aspirated/unaspirated releases sharing that closure
PLOSIVE_FAMILIES = {
    "k": ["k", "kh"], "g": ["g", "gh"], "ch": ["ch", "chh"], "j": ["j", "jh"],
    "t": ["t", "th"], "d": ["d", "dh"], "tt": ["tt", "tth"], "dd": ["dd", "ddh"],
    "p": ["p", "ph"], "b": ["b", "bh"],
}


def build_phone_set() -> PhoneSet:
    units: list[str] = list(VOWELS) + list(CONSONANTS)
    kinds: dict[str, str] = {u: "vowel" for u in VOWELS}
    kinds.update({u: "consonant" for u in CONSONANTS})
    pairs: dict[str, tuple[str, str]] = {}
    for base, releases in PLOSIVE_FAMILIES.items():
        closure = base + "cl"
        units.append(closure)
        kinds[closure] = "closure"
        for release in releases:
            units.append(release)
            kinds[release] = "release"
            pairs[release] = (closure, release)
    phone_set = PhoneSet(units=tuple(units), kinds=kinds, closure_release_pairs=pairs)
    assert len(phone_set) == 48, len(phone_set)
    return phone_set


# ---------------------------------------------------------------------------
# pronunciation lexicon (romanized word -> phone string, plosives unexpanded)

PRONUNCIATIONS = {
    "aaj": "aa j", "aam": "aa m", "aalu": "aa l u", "abhi": "a bh ii",
    "achha": "a chh aa", "agra": "a g r aa", "bada": "b a dd aa",
    "bajar": "b aa j a r", "balu": "b aa l u", "bhav": "bh aa v",
    "bhavon": "bh aa v o n", "bharat": "bh aa r a t", "bhutan": "bh uu t aa n",
    "bili": "b i l i", "chai": "ch ai", "chawal": "ch aa v a l",
    "chin": "ch ii n", "chini": "ch ii n ii", "daam": "d aa m",
    "dandi": "d a n d i", "des": "d e s", "dili": "d i l i",
    "din": "d i n", "doodh": "d uu dh", "duniya": "d u n i y aa",
    "gaon": "g aa o n", "gaya": "g a y aa", "gehun": "g e h uu n",
    "ghar": "gh a r", "hai": "h ai", "hain": "h ai n",
    "jaipur": "j ai p u r", "ja": "j aa", "jata": "j aa t aa",
    "japan": "j a p aa n", "ka": "k a", "kal": "k a l", "ke": "k e",
    "kela": "k e l aa", "kele": "k e l e", "kha": "kh aa",
    "khabar": "kh a b a r", "khata": "kh aa t aa", "ki": "k i",
    "kitab": "k i t aa b", "kya": "k y aa", "lanka": "l a n k aa",
    "likh": "l i kh", "likha": "l i kh aa", "liye": "l i y e",
    "mandi": "m a n d i", "mandiyon": "m a n d i y o n",
    "matlab": "m a t l a b", "mein": "m e n", "mumbai": "m u m b ai",
    "naam": "n aa m", "namak": "n a m a k", "nepal": "n e p aa l",
    "paani": "p aa n ii", "par": "p a r", "phal": "ph a l",
    "pyaj": "p y aa j", "raat": "r aa t", "rajdhani": "r aa j dh aa n ii",
    "rupai": "r u p ai", "sabji": "s a b j ii", "samay": "s a m a y",
    "sasta": "s a s t aa", "se": "s e", "seb": "s e b",
    "sona": "s o n aa", "sone": "s o n e", "tamatar": "t a m aa t a r",
    "tha": "th aa", "the": "th e", "thi": "th ii", "vahan": "v a h aa n",
    "who": "h uu", "yahan": "y a h aa n",
}


# ---------------------------------------------------------------------------
# source lexicon

ROOT_CATEGORIES = {
    "aam": "noun", "aalu": "noun", "agra": "noun", "bajar": "noun",
    "bhav": "noun", "bharat": "noun", "bhutan": "noun", "chai": "noun",
    "chawal": "noun", "chin": "noun", "chini": "noun", "daam": "noun",
    "des": "noun", "dili": "noun", "din": "noun", "doodh": "noun",
    "duniya": "noun", "gaon": "noun", "gehun": "noun", "ghar": "noun",
    "jaipur": "noun", "japan": "noun", "kela": "noun", "khabar": "noun",
    "kitab": "noun", "lanka": "noun", "mandi": "noun", "matlab": "noun",
    "mumbai": "noun", "naam": "noun", "namak": "noun", "nepal": "noun",
    "paani": "noun", "phal": "noun", "pyaj": "noun", "raat": "noun",
    "rajdhani": "noun", "rupai": "noun", "sabji": "noun", "samay": "noun",
    "seb": "noun", "sona": "noun", "tamatar": "noun", "who": "noun",
    "kya": "pronoun",
    "ki": "postposition", "ka": "postposition", "ke": "postposition",
    "ke liye": "postposition", "mein": "postposition", "par": "postposition",
    "se": "postposition",
    "aaj": "adverb", "kal": "adverb", "abhi": "adverb", "yahan": "adverb",
    "vahan": "adverb",
    "achha": "adjective", "bada": "adjective", "sasta": "adjective",
    "likh": "verb", "ja": "verb", "kha": "verb",
}

NOUN_FEATURES = {
    "aalu": "gender=m", "bhav": "gender=m", "chai": "gender=f",
    "chini": "gender=f", "daam": "gender=m", "dili": "gender=f",
    "doodh": "gender=m", "kitab": "gender=f", "mandi": "gender=f",
    "paani": "gender=m", "rajdhani": "gender=f", "sona": "gender=m",
}

VERB_FEATURES = {"ja": "", "kha": "", "likh": ""}

# lang, surface, root, category, features
DIRECT_ENTRIES = [
    ("hi", "kya", "kya", "pronoun", ""),
    ("hi", "ki", "ki", "postposition", ""),
    ("hi", "ka", "ka", "postposition", ""),
    ("hi", "ke", "ke", "postposition", ""),
    ("hi", "ke liye", "ke liye", "postposition", ""),
    ("hi", "mein", "mein", "postposition", ""),
    ("hi", "par", "par", "postposition", ""),
    ("hi", "se", "se", "postposition", ""),
    ("hi", "aaj", "aaj", "adverb", ""),
    ("hi", "kal", "kal", "adverb", ""),
    ("hi", "abhi", "abhi", "adverb", ""),
    ("hi", "yahan", "yahan", "adverb", ""),
    ("hi", "vahan", "vahan", "adverb", ""),
    ("en", "give up", "give up", "verb", ""),
    ("en", "put off", "put off", "verb", ""),
    ("en", "delhi market", "delhi market", "noun", ""),
]

SUFFIX_INVENTORY = [
    ("iyon", "noun"), ("on", "noun"), ("e", "noun"),
    ("ta", "verb"), ("ti", "verb"), ("a", "verb"),
]

AUXILIARIES = {
    "hai": "person=third;tense=present",
    "hain": "number=plural;tense=present",
    "tha": "gender=m;tense=past",
    "thi": "gender=f;tense=past",
    "the": "number=plural;tense=past",
}

# specific rules first, identity last: generation applies the first rule
# whose features are all requested
PARADIGMS_HI = [
    ("noun", "iyon", "i", "case=oblique;number=plural"),
    ("noun", "on", "", "case=oblique;number=plural"),
    ("noun", "e", "a", "case=oblique"),
    ("noun", "", "", ""),
    ("verb", "ta", "", "gender=m;tense=present"),
    ("verb", "ti", "", "gender=f;tense=present"),
    ("verb", "a", "", "gender=m;tense=past"),
    ("verb", "", "", ""),
    ("verb", "*gaya", "ja", "gender=m;tense=past"),
]

PARADIGMS_EN = [
    ("noun", "s", "", "number=plural"),
    ("noun", "", "", ""),
    ("verb", "ed", "", "tense=past"),
    ("verb", "ing", "", "aspect=progressive"),
    ("verb", "", "", ""),
    ("noun", "*potatoes", "potato", "number=plural"),
    ("noun", "*children", "child", "number=plural"),
    ("verb", "*went", "go", "tense=past"),
]

# source_root, target_root, category, constraints
LEX_H2E = [
    ("aaj", "today", "adverb", ""),
    ("kal", "tomorrow", "adverb", ""),
    ("abhi", "now", "adverb", ""),
    ("yahan", "here", "adverb", ""),
    ("vahan", "there", "adverb", ""),
    ("dili", "delhi", "noun", ""),
    ("agra", "agra", "noun", ""),
    ("jaipur", "jaipur", "noun", ""),
    ("mumbai", "mumbai", "noun", ""),
    ("japan", "japan", "noun", ""),
    ("chin", "china", "noun", ""),
    ("nepal", "nepal", "noun", ""),
    ("bhutan", "bhutan", "noun", ""),
    ("lanka", "lanka", "noun", ""),
    ("bharat", "india", "noun", ""),
    ("mandi", "market", "noun", ""),
    ("bajar", "market", "noun", ""),
    ("aalu", "potato", "noun", "number=plural"),
    ("gehun", "wheat", "noun", ""),
    ("pyaj", "onion", "noun", "number=plural"),
    ("chawal", "rice", "noun", ""),
    ("doodh", "milk", "noun", ""),
    ("chini", "sugar", "noun", ""),
    ("chai", "tea", "noun", ""),
    ("namak", "salt", "noun", ""),
    ("kela", "banana", "noun", "number=plural"),
    ("seb", "apple", "noun", "number=plural"),
    ("tamatar", "tomato", "noun", "number=plural"),
    ("bhav", "price", "noun", ""),
    ("daam", "price", "noun", ""),
    ("sona", "gold", "noun", ""),
    ("rupai", "rupee", "noun", ""),
    ("rajdhani", "capital", "noun", ""),
    ("matlab", "meaning", "noun", ""),
    ("who", "who", "noun", ""),
    ("paani", "water", "noun", ""),
    ("des", "country", "noun", ""),
    ("duniya", "world", "noun", ""),
    ("samay", "time", "noun", ""),
    ("din", "day", "noun", ""),
    ("raat", "night", "noun", ""),
    ("kitab", "book", "noun", ""),
    ("ghar", "house", "noun", ""),
    ("gaon", "village", "noun", ""),
    ("khabar", "news", "noun", ""),
    ("phal", "fruit", "noun", ""),
    ("sabji", "vegetable", "noun", ""),
    ("naam", "name", "noun", ""),
    ("aam", "mango", "noun", ""),
    ("ki", "of", "postposition", ""),
    ("ka", "of", "postposition", ""),
    ("ke", "of", "postposition", ""),
    ("ke liye", "for", "postposition", ""),
    ("mein", "in", "postposition", ""),
    ("par", "on", "postposition", ""),
    ("se", "from", "postposition", ""),
    ("kya", "what", "pronoun", ""),
    ("likh", "write", "verb", ""),
    ("ja", "go", "verb", ""),
    ("kha", "eat", "verb", ""),
    ("achha", "good", "adjective", ""),
    ("bada", "big", "adjective", ""),
    ("sasta", "cheap", "adjective", ""),
]

LEX_E2H = [
    ("today", "aaj", "adverb", ""),
    ("tomorrow", "kal", "adverb", ""),
    ("now", "abhi", "adverb", ""),
    ("delhi", "dili", "noun", ""),
    ("agra", "agra", "noun", ""),
    ("jaipur", "jaipur", "noun", ""),
    ("mumbai", "mumbai", "noun", ""),
    ("japan", "japan", "noun", ""),
    ("china", "chin", "noun", ""),
    ("nepal", "nepal", "noun", ""),
    ("bhutan", "bhutan", "noun", ""),
    ("lanka", "lanka", "noun", ""),
    ("india", "bharat", "noun", ""),
    ("market", "mandi", "noun", ""),
    ("potato", "aalu", "noun", ""),
    ("wheat", "gehun", "noun", ""),
    ("onion", "pyaj", "noun", ""),
    ("rice", "chawal", "noun", ""),
    ("milk", "doodh", "noun", ""),
    ("sugar", "chini", "noun", ""),
    ("tea", "chai", "noun", ""),
    ("salt", "namak", "noun", ""),
    ("banana", "kela", "noun", ""),
    ("apple", "seb", "noun", ""),
    ("tomato", "tamatar", "noun", ""),
    ("price", "bhav", "noun", ""),
    ("gold", "sona", "noun", ""),
    ("rupee", "rupai", "noun", ""),
    ("capital", "rajdhani", "noun", ""),
    ("meaning", "matlab", "noun", ""),
    ("who", "who", "noun", ""),
    ("water", "paani", "noun", ""),
    ("country", "des", "noun", ""),
    ("world", "duniya", "noun", ""),
    ("time", "samay", "noun", ""),
    ("day", "din", "noun", ""),
    ("night", "raat", "noun", ""),
    ("book", "kitab", "noun", ""),
    ("house", "ghar", "noun", ""),
    ("village", "gaon", "noun", ""),
    ("news", "khabar", "noun", ""),
    ("fruit", "phal", "noun", ""),
    ("vegetable", "sabji", "noun", ""),
    ("name", "naam", "noun", ""),
    ("mango", "aam", "noun", ""),
    ("of", "ka", "postposition", ""),
    ("in", "mein", "postposition", ""),
    ("on", "par", "postposition", ""),
    ("from", "se", "postposition", ""),
    ("what", "kya", "pronoun", ""),
    ("write", "likh", "verb", ""),
    ("go", "ja", "verb", ""),
    ("eat", "kha", "verb", ""),
    ("good", "achha", "adjective", ""),
    ("big", "bada", "adjective", ""),
    ("cheap", "sasta", "adjective", ""),
]

STOPWORDS = [
    "a", "an", "and", "are", "at", "by", "for", "from", "how", "in", "is",
    "it", "of", "on", "or", "that", "the", "this", "to", "was", "were",
    "what", "with",
]


# ---------------------------------------------------------------------------
# query corpus: Hindi sides only; English sides come from the pipeline

CITIES = ["dili", "agra", "jaipur", "mumbai"]
COMMODITIES = ["aalu", "gehun", "pyaj", "chawal", "doodh", "chini", "namak", "tamatar"]
GENITIVE_COMMODITY = {
    # oblique surface used before `ka`
    "aalu": "aalu", "gehun": "gehun", "pyaj": "pyaj", "chawal": "chawal",
    "doodh": "doodh", "chini": "chini", "chai": "chai", "namak": "namak",
    "kela": "kele", "seb": "seb", "tamatar": "tamatar", "sona": "sone",
}
COUNTRIES = ["bharat", "japan", "chin", "nepal", "bhutan", "lanka"]


def corpus_hindi_sentences() -> list[str]:
    sentences = []
    for city in CITIES:
        for commodity in COMMODITIES:
            sentences.append(f"aaj {city} ki mandi mein {GENITIVE_COMMODITY[commodity]} ka bhav kya hai")
    for commodity in GENITIVE_COMMODITY:
        sentences.append(f"{GENITIVE_COMMODITY[commodity]} ka bhav kya hai")
    for country in COUNTRIES:
        sentences.append(f"{country} ki rajdhani kya hai")
    sentences.append("who ka kya matlab hai")
    sentences.append("paani ka matlab kya hai")
    for city in CITIES:
        sentences.append(f"{city} mein sabji ka daam kya hai")
    for commodity in ["doodh", "chai", "seb"]:
        sentences.append(f"aaj {GENITIVE_COMMODITY[commodity]} ka daam kya hai")
    sentences.append("duniya ki khabar kya hai")
    sentences.append("bharat ka naam kya hai")
    sentences.append("aaj ka din kya hai")
    return sentences


# ---------------------------------------------------------------------------
# searchable document corpus


def build_documents() -> list[Document]:
    def doc(doc_id, slug, title, body, links):
        return Document(id=doc_id, url=f"local://{slug}", title=title, body=tuple(body),
                        links=tuple(Link(text, f"local://{target}") for text, target in links))

    return [
        doc("d01", "mandi-prices", "Delhi mandi commodity prices",
            ["Daily wholesale rates from the Delhi mandi.",
             "The price of potatoes in the market of Delhi today is 20 rupees per kilogram.",
             "The price of onions in the market of Delhi today is 30 rupees per kilogram.",
             "Fresh vegetable stock arrives every morning."],
            [("Gold and silver rates", "gold-prices"),
             ("Weather in Delhi", "delhi-weather"),
             ("About this directory", "about")]),
        doc("d02", "gold-prices", "Gold price today",
            ["Bullion market update for today.",
             "The price of gold today is 31500 rupees.",
             "The price of silver today is 43000 rupees."],
            [("Delhi mandi prices", "mandi-prices"),
             ("Currency rates", "currency")]),
        doc("d03", "who-facts", "About the WHO",
            ["WHO stands for the World Health Organization.",
             "The meaning of WHO is the World Health Organization.",
             "It coordinates international public health work."],
            [("Public health news", "health-news")]),
        doc("d04", "capitals", "Capital cities of the world",
            ["A list of countries and their capital cities.",
             "The capital of India is delhi.",
             "The capital of Japan is tokyo.",
             "The capital of Nepal is kathmandu."],
            [("India travel guide", "india-travel"),
             ("About this directory", "about")]),
        doc("d05", "delhi-weather", "Weather in Delhi",
            ["The weather in Delhi today is sunny.",
             "Expect heat during the day."],
            [("Delhi mandi prices", "mandi-prices"),
             ("Currency rates", "currency")]),
        doc("d06", "currency", "Currency exchange rates",
            ["One dollar is 83 rupees today.",
             "Exchange rates move daily."],
            [("About this directory", "about")]),
        doc("d07", "health-news", "Public health news",
            ["Vaccination drives continue across districts.",
             "The World Health Organization issued new guidance."],
            [("About the WHO", "who-facts")]),
        doc("d08", "about", "About this directory",
            ["A small offline corpus used for search demos."],
            []),
        doc("d09", "india-travel", "India travel guide",
            ["Delhi, Agra and Jaipur form the golden triangle.",
             "The best season to visit India is winter."],
            [("Capital cities of the world", "capitals"),
             ("About this directory", "about")]),
    ]


TEMPLATES = [
    ("price", "{1} ka bhav {2} rupai hai"),
    ("meaning", "{1} ka matlab {2}"),
    ("capital", "{1} ki rajdhani {2} hai"),
]


# ---------------------------------------------------------------------------


def build_bundle_without_corpus() -> ResourceBundle:
    phones = build_phone_set()
    pron = PronLexicon(entries={w: tuple(p.split()) for w, p in PRONUNCIATIONS.items()})

    def rules(table):
        return tuple(TransferRule(s, t, c, parse_features(f), i)
                     for i, (s, t, c, f) in enumerate(table))

    lex_h2e = BilingualLexicon("h2e", rules(LEX_H2E))
    lex_e2h = BilingualLexicon("e2h", rules(LEX_E2H))

    def paradigms(table):
        rules_, irregulars = [], []
        for category, suffix, repl, feats in table:
            if suffix.startswith("*"):
                irregulars.append(Irregular(category, suffix[1:], repl,
                                            parse_features(feats), len(irregulars)))
            else:
                rules_.append(SuffixRule(category, suffix, repl,
                                         parse_features(feats), len(rules_)))
        return ParadigmTable(tuple(rules_), tuple(irregulars))

    source = SourceLexicon(
        root_categories={r: frozenset({c}) for r, c in ROOT_CATEGORIES.items()},
        verb_features={r: parse_features(f) for r, f in VERB_FEATURES.items()},
        noun_features={r: parse_features(f) for r, f in NOUN_FEATURES.items()},
        direct_entries=tuple(DirectEntry(lang, tuple(surface.split()), root, category,
                                         parse_features(feats), i)
                             for i, (lang, surface, root, category, feats)
                             in enumerate(DIRECT_ENTRIES)),
        suffix_inventory=tuple(SUFFIX_INVENTORY),
        auxiliaries={w: parse_features(f) for w, f in AUXILIARIES.items()},
    )
    placeholder = QueryCorpus(pairs=(AlignedPair(("kya",), ("what",), ()),))
    return ResourceBundle(
        phones=phones, pron=pron, lex_h2e=lex_h2e, lex_e2h=lex_e2h,
        paradigms_hi=paradigms(PARADIGMS_HI), paradigms_en=paradigms(PARADIGMS_EN),
        source_lexicon=source, stopwords=StopWordList(frozenset(STOPWORDS)),
        corpus=placeholder,
    )


def build_corpus(bundle: ResourceBundle) -> QueryCorpus:
    tagger = bundle.tagger("hi")
    aux = bundle.source_lexicon.auxiliaries
    pairs = []
    for sentence in corpus_hindi_sentences():
        hindi = tuple(sentence.split())
        record = analyze_text(sentence, tagger, aux)
        transferred = transfer_items(record, bundle.lex_h2e, bundle.paradigms_en)
        english = tuple(realize_question(transferred, record.removed_auxiliaries))
        consumed = [False] * len(english)
        alignment = []

        def consume(token: str) -> int | None:
            for e, word in enumerate(english):
                if not consumed[e] and word == token:
                    consumed[e] = True
                    return e
            return None

        for t in transferred:
            for token in t.tokens:
                e = consume(token)
                if e is not None:
                    alignment.append((t.item.span[0], e))
        for removed in record.removed_auxiliaries:
            e = consume("is") or consume("was")
            if e is not None:
                alignment.append((removed.position, e))
        alignment.sort()
        pairs.append(AlignedPair(hindi, english, tuple(alignment)))
    return QueryCorpus(pairs=tuple(pairs))


def main() -> None:
    bundle = build_bundle_without_corpus()
    save_resources(bundle, DATA_DIR)
    bundle = load_resources(DATA_DIR)  # pick up derived English roots
    corpus = build_corpus(bundle)
    save_resources(ResourceBundle(
        phones=bundle.phones, pron=bundle.pron, lex_h2e=bundle.lex_h2e,
        lex_e2h=bundle.lex_e2h, paradigms_hi=bundle.paradigms_hi,
        paradigms_en=bundle.paradigms_en, source_lexicon=bundle.source_lexicon,
        stopwords=bundle.stopwords, corpus=corpus,
    ), DATA_DIR)

    save_documents(build_documents(), DATA_DIR / "docs.jsonl")
    with open(DATA_DIR / "templates.tsv", "w", encoding="utf-8") as fh:
        for pattern, template in TEMPLATES:
            fh.write(f"{pattern}\t{template}\n")

    final = load_resources(DATA_DIR)
    missing = final.oov_report()
    if missing:
        raise SystemExit(f"corpus tokens lack pronunciations: {missing}")
    print(f"wrote {DATA_DIR}")
    print(f"phones={len(final.phones)} pron={len(final.pron)} corpus={len(final.corpus)}")


if __name__ == "__main__":
    main()

"""Reverse/forward morphology and Hindi-to-English transfer."""

from bolkhoj.features import parse_features
from bolkhoj.morphology import analyze, analyze_text, generate
from bolkhoj.resources import load_default_resources
from bolkhoj.transfer import translate_hi_to_en

bundle = load_default_resources()
roots = bundle.source_lexicon.root_categories

# reverse morphology: surface -> root + features
for word in ["mandiyon", "sone", "bhavon", "aalu"]:
    root, feats = analyze(word, bundle.paradigms_hi, roots)
    print(f"{word:10s} -> {root:8s} {sorted(feats)}")

# forward morphology: root + features -> surface
print(generate("potato", parse_features("number=plural"), bundle.paradigms_en, "noun"))
print(generate("go", parse_features("tense=past"), bundle.paradigms_en, "verb"))

# tagging pulls multi-word lexical items together
record = analyze_text("what is the price of potato in delhi market today",
                      bundle.tagger("en"), {})
print([item.surface for item in record.items])

# the full transfer chain, with auxiliaries removed and the question
# frame reordering the genitive chains
query = "aaj dili ki mandi mein aalu ka bhav kya hai"
print(query)
print(" ".join(translate_hi_to_en(query, bundle)))

"""The accuracy formula and sentence-level scoring."""

from bolkhoj.evaluate import accuracy, run_experiment, score_sentences
from bolkhoj.resources import load_default_resources
from bolkhoj.transfer import translate_hi_to_en

# accuracy = (S - E_s - E_d) / S * 100, one decimal place
print(accuracy(478, 66, 33))   # 79.3
print(accuracy(100, 0, 0))     # 100.0

# a substituted word is E_s, a missing word is E_d
refs = ["aaj dili ki mandi".split(),
        "mein aalu ka bhav kya hai".split()]
hyps = ["aaj bili ki mandi".split(),
        "mein ka bhav kya hai".split()]
print(score_sentences(refs, hyps))   # (2, 1, 1)

# translation consistency over the shipped aligned corpus
bundle = load_default_resources()
items = [(list(p.english), list(p.hindi)) for p in bundle.corpus.pairs]

def system(item, rng):
    return translate_hi_to_en(" ".join(item[1]), bundle)

half = len(items) // 2
report = run_experiment(items, system,
                        [("first", list(range(half))),
                         ("second", list(range(half, len(items))))],
                        seed=0)
print(report.to_tsv())

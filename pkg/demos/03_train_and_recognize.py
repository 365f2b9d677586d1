"""Self-recognition: train monophones on sampled speech, decode sampled
utterances over a ten-word grammar, score sentence accuracy."""

from bolkhoj.resources import load_default_resources
from bolkhoj.simulate import build_self_recognition, run_self_recognition, sample_utterance

bundle = load_default_resources()
words = ["aaj", "dili", "mandi", "aalu", "bhav",
         "sona", "bharat", "rajdhani", "kya", "mein"]

# peek at a few decoded utterances
setup = build_self_recognition(bundle, words, seed=42)
from bolkhoj.recognizer import decode  # noqa: E402

for _ in range(3):
    ref, frames = sample_utterance(setup)
    hyp = decode(setup.grammar, frames)
    mark = "ok " if tuple(ref) == hyp.words else "ERR"
    print(f"{mark} said {' '.join(ref):30s} heard {' '.join(hyp.words)}")

# the full experiment: 100 utterances, scored like the evaluation harness
report = run_self_recognition(bundle, words, seed=42, num_utterances=100)
print()
print(report.to_tsv())

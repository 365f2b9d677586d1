"""Acceptance gate: every criterion at its stated tolerance, one
PASS/FAIL line each (run with `pytest tests/test_acceptance.py -v -s`)."""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from bolkhoj.evaluate import EvalError, accuracy
from bolkhoj.hmm import TrainConfig, baum_welch, flat_start, forward_loglik, \
    make_left_to_right, sample, viterbi
from bolkhoj.morphology import analyze, generate
from bolkhoj.recognizer import ConfusionModel
from bolkhoj.search import drop_stop_words, number_hyperlinks
from bolkhoj.session import (ASK_AGAIN, NAVIGATED, RECOGNIZED, RESULTS,
                             ErrorSimulation, RangeError, SessionConfig,
                             SessionEngine, StateError)
from bolkhoj.simulate import run_self_recognition
from bolkhoj.transfer import translate_hi_to_en
from conftest import (enumerate_best_path, enumerate_paths_loglik,
                      random_exit_mass_model, random_free_end_model)

WORKED_QUERY = "aaj dili ki mandi mein aalu ka bhav kya hai"
WORKED_ENGLISH = "what is the price of potatoes in the market of delhi today".split()


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"FAIL  {name}")
        raise
    print(f"PASS  {name}")


def test_hmm_oracle_equivalence():
    with criterion("HMM oracle equivalence (200 instances, 1e-9, < 5 s)"):
        rng = np.random.default_rng(2024)
        start = time.perf_counter()
        for trial in range(200):
            n = int(rng.integers(1, 5))          # N <= 4
            t = int(rng.integers(1, 7))          # T <= 6
            d = int(rng.integers(1, 4))          # D <= 3
            if trial % 2 == 0:
                model = random_free_end_model(rng, n, d)
            else:
                model = random_exit_mass_model(rng, n, d)
            obs = rng.normal(size=(t, d))
            assert forward_loglik(model, obs) == pytest.approx(
                enumerate_paths_loglik(model, obs), abs=1e-9)
            path, lp = viterbi(model, obs)
            ref_path, ref_lp = enumerate_best_path(model, obs)
            assert lp == pytest.approx(ref_lp, abs=1e-9)
            assert path == ref_path
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"took {elapsed:.2f} s"


def test_baum_welch_monotonicity():
    with criterion("Baum-Welch monotonicity (20 runs x 20 iterations, 1e-6)"):
        for seed in range(20):
            rng = np.random.default_rng(1000 + seed)
            dims = int(rng.integers(1, 4))
            gen = make_left_to_right(rng.normal(0, 2, (3, dims)), np.ones((3, dims)))
            data = [sample(gen, int(rng.integers(6, 14)), rng) for _ in range(6)]
            result = baum_welch(flat_start(3, data), data,
                                TrainConfig(max_iters=20, loglik_rel_tol=0.0))
            history = np.array(result.loglik_history)
            assert np.all(np.diff(history) >= -1e-6), f"seed {seed} decreased"
            result.model.validate()  # row-stochastic + variance floor


def test_self_recognition_experiment(bundle):
    with criterion("Self-recognition >= 95% sentence accuracy (seed 42, < 60 s)"):
        words = ["aaj", "dili", "mandi", "aalu", "bhav",
                 "sona", "bharat", "rajdhani", "kya", "mein"]
        start = time.perf_counter()
        report = run_self_recognition(bundle, words, seed=42, num_utterances=100)
        elapsed = time.perf_counter() - start
        assert report.groups[0].s == 100
        assert report.overall_accuracy_percent >= 95.0
        assert elapsed < 60.0, f"took {elapsed:.2f} s"


def test_accuracy_formula():
    with criterion("Accuracy formula (79.3 headline, 100.0, preconditions)"):
        assert accuracy(478, 66, 33) == pytest.approx(79.3, abs=0.05)
        assert accuracy(100, 0, 0) == 100.0
        with pytest.raises(EvalError):
            accuracy(10, 8, 3)
        with pytest.raises(EvalError):
            accuracy(0, 0, 0)


def test_worked_translation(bundle):
    with criterion("Worked translation token-exact + stop-word drop"):
        english = translate_hi_to_en(WORKED_QUERY, bundle)
        assert english == WORKED_ENGLISH
        keywords = drop_stop_words(english, bundle.stopwords)
        assert not set(keywords) & set(bundle.stopwords.words)
        assert set(keywords) >= {"price", "potatoes", "market", "delhi", "today"}


DIALOGS = [
    ("sone ka bhav kya hain", "31500"),
    ("who ka kya matlab hai", "World Health Organization"),
    ("bharat ki rajdhani kya hai", "delhi"),
]


def test_dialog_reproduction(bundle, documents, templates):
    with criterion("Dialog reproduction (31500 / WHO / delhi, < 1 s each)"):
        engine = SessionEngine(bundle, documents, templates)
        for query, expected in DIALOGS:
            session = engine.create_session()
            start = time.perf_counter()
            engine.submit_query(session, text=query)
            assert session.state == RECOGNIZED
            engine.confirm(session)
            elapsed = time.perf_counter() - start
            snap = engine.get_state(session)
            assert snap["state"] == "results"
            assert expected in snap["answer"]["hindi"], (query, snap["answer"])
            assert elapsed < 1.0, f"{query} took {elapsed:.2f} s"


def test_hyperlink_navigation(bundle, documents, templates):
    with criterion("Hyperlink numbering 1..L and select bounds, every document"):
        engine = SessionEngine(bundle, documents, templates)
        for doc in documents:
            numbered = number_hyperlinks(doc)
            assert [l.number for l in numbered] == list(range(1, len(doc.links) + 1))
            assert [l.href for l in numbered] == [l.href for l in doc.links]
            # place a session on this document and exercise the bounds
            session = engine.create_session()
            engine.submit_query(session, text=WORKED_QUERY)
            engine.confirm(session)
            assert session.state == RESULTS
            session.current_page_id = doc.id
            for n in range(1, len(doc.links) + 1):
                snapshot = engine.get_state(session)
                engine.select_link(session, n)
                assert session.state == NAVIGATED
                assert engine.get_state(session)["page"] == \
                    engine.docs_by_url[doc.links[n - 1].href].id
                session.current_page_id = doc.id  # reset for the next n
            before = engine.get_state(session)
            with pytest.raises(RangeError):
                engine.select_link(session, len(doc.links) + 1)
            assert engine.get_state(session) == before


def test_retry_loop_and_fuzz(bundle, documents, templates):
    with criterion("Retry loop on injected substitution + 1000-sequence fuzz"):
        sim = ErrorSimulation(confusion=ConfusionModel({"dili": {"bili": 1.0}}, {}),
                              seed=42)
        engine = SessionEngine(bundle, documents, templates,
                               config=SessionConfig(error_simulation=sim))
        session = engine.create_session()
        engine.submit_query(session, text=WORKED_QUERY)
        assert session.state == ASK_AGAIN  # low-confidence injected token
        engine.submit_query(session, text="sone ka bhav kya hai")
        assert session.state == RECOGNIZED
        engine.confirm(session)
        assert session.state == RESULTS

        plain = SessionEngine(bundle, documents, templates)
        legal = {
            "await_query": {"query": {RECOGNIZED, ASK_AGAIN}},
            ASK_AGAIN: {"query": {RECOGNIZED, ASK_AGAIN}},
            RECOGNIZED: {"confirm": {RESULTS, "no_results", ASK_AGAIN},
                         "reject": {ASK_AGAIN}},
            RESULTS: {"query": {RECOGNIZED, ASK_AGAIN}, "select": {NAVIGATED}},
            NAVIGATED: {"query": {RECOGNIZED, ASK_AGAIN}, "select": {NAVIGATED}},
            "no_results": {"query": {RECOGNIZED, ASK_AGAIN}},
        }
        queries = [WORKED_QUERY, "sone ka bhav kya hai", "kya hai", "999777",
                   "bharat ki rajdhani kya hai", ""]
        rng = np.random.default_rng(7)
        ops = ["query", "confirm", "reject", "select"]
        for _ in range(1000):
            s = plain.create_session()
            for _ in range(6):
                op = ops[rng.integers(len(ops))]
                before = s.state
                try:
                    if op == "query":
                        plain.submit_query(s, text=queries[rng.integers(len(queries))])
                    elif op == "confirm":
                        plain.confirm(s)
                    elif op == "reject":
                        plain.reject(s)
                    else:
                        plain.select_link(s, int(rng.integers(1, 5)))
                except (StateError, RangeError):
                    assert s.state == before
                    continue
                assert op in legal[before], (before, op)
                assert s.state in legal[before][op], (before, op, s.state)


def test_morphology_round_trip(bundle):
    with criterion("Morphology round trip, 100% of paradigm rows"):
        for lang in ("hi", "en"):
            paradigms = bundle.paradigms_hi if lang == "hi" else bundle.paradigms_en
            roots_table = (bundle.source_lexicon.root_categories if lang == "hi"
                           else bundle.english_root_categories)
            for rule in paradigms.rules:
                compatible = [r for r, cats in sorted(roots_table.items())
                              if rule.category in cats and " " not in r
                              and (not rule.replacement or r.endswith(rule.replacement))]
                assert compatible, f"rule {rule} exercised by no fixture root"
                for root in compatible:
                    surface = generate(root, rule.features, paradigms, rule.category)
                    back_root, back_feats = analyze(surface, paradigms, roots_table)
                    assert back_root == root, (lang, rule, root, surface)
                    assert back_feats >= rule.features, (lang, rule, root, surface)
            for irr in paradigms.irregulars:
                assert generate(irr.root, irr.features, paradigms, irr.category) == irr.surface
                back_root, back_feats = analyze(irr.surface, paradigms, roots_table)
                assert (back_root, back_feats) == (irr.root, irr.features)

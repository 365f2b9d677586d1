import numpy as np
import pytest

from bolkhoj.audio import AudioClip
from bolkhoj.recognizer import ConfusionModel
from bolkhoj.session import (ASK_AGAIN, AWAIT_QUERY, NAVIGATED, NO_RESULTS,
                             RECOGNIZED, RESULTS, ConfigError, ErrorSimulation,
                             InputError, NavigationError, RangeError,
                             SessionConfig, SessionEngine, StateError,
                             UnknownSessionError)

WORKED_QUERY = "aaj dili ki mandi mein aalu ka bhav kya hai"


@pytest.fixture()
def engine(bundle, documents, templates):
    return SessionEngine(bundle, documents, templates)


@pytest.fixture()
def session(engine):
    return engine.create_session()


# -- creation -----------------------------------------------------------------


def test_create_starts_awaiting(engine):
    session = engine.create_session()
    assert session.state == AWAIT_QUERY
    assert engine.get_state(session)["state"] == AWAIT_QUERY


def test_create_distinct_ids(engine):
    assert engine.create_session().id != engine.create_session().id


def test_config_threshold_validated():
    with pytest.raises(ConfigError):
        SessionConfig(confidence_threshold=1.5)
    with pytest.raises(ConfigError):
        SessionConfig(confidence_threshold=0.0)


# -- submit -------------------------------------------------------------------


def test_submit_text_recognized_with_full_confidence(engine, session):
    engine.submit_query(session, text=WORKED_QUERY)
    assert session.state == RECOGNIZED
    snap = engine.get_state(session)
    assert snap["hypothesis"]["words"] == WORKED_QUERY.split()
    assert all(c == 1.0 for c in snap["hypothesis"]["confidences"])


def test_submit_empty_text_asks_again(engine, session):
    engine.submit_query(session, text="   ")
    assert session.state == ASK_AGAIN
    assert engine.get_state(session)["message"]


def test_submit_non_ascii_rejected(engine, session):
    with pytest.raises(InputError):
        engine.submit_query(session, text="क्या")
    assert session.state == AWAIT_QUERY


def test_submit_audio_without_models_rejected(engine, session):
    with pytest.raises(InputError, match="audio mode unavailable"):
        engine.submit_query(session, clip=AudioClip(samples=np.zeros(16000)))


def test_submit_in_recognized_state_rejected(engine, session):
    engine.submit_query(session, text=WORKED_QUERY)
    with pytest.raises(StateError):
        engine.submit_query(session, text="sone ka bhav kya hai")


def test_unknown_session_id(engine):
    with pytest.raises(UnknownSessionError):
        engine.get_state("nope")


# -- confirm / reject ------------------------------------------------------------


def test_confirm_reaches_results_with_answer(engine, session):
    engine.submit_query(session, text=WORKED_QUERY)
    engine.confirm(session)
    assert session.state == RESULTS
    snap = engine.get_state(session)
    assert snap["results"] and snap["results"][0]["rank"] == 1
    assert snap["answer"]["hindi"]
    assert snap["links"][0]["number"] == 1


def test_confirm_all_stop_words_asks_again(engine, session):
    engine.submit_query(session, text="kya hai")
    engine.confirm(session)
    assert session.state == ASK_AGAIN


def test_confirm_wrong_state_names_current(engine, session):
    with pytest.raises(StateError, match=AWAIT_QUERY):
        engine.confirm(session)


def test_confirm_no_results(engine, session):
    # every content token is unknown to the transfer lexicon, so the
    # query becomes markers plus one passthrough digit keyword
    engine.submit_query(session, text="999777")
    engine.confirm(session)
    assert session.state == NO_RESULTS
    assert engine.get_state(session)["message"]


def test_reject_discards_hypothesis(engine, session):
    engine.submit_query(session, text=WORKED_QUERY)
    before = len(session.history)
    engine.reject(session)
    assert session.state == ASK_AGAIN
    assert session.last_hypothesis is None
    assert len(session.history) == before + 1


def test_reject_wrong_state(engine, session):
    with pytest.raises(StateError):
        engine.reject(session)


def test_resubmit_after_ask_again(engine, session):
    engine.submit_query(session, text="kya hai")
    engine.confirm(session)
    assert session.state == ASK_AGAIN
    engine.submit_query(session, text=WORKED_QUERY)
    assert session.state == RECOGNIZED


# -- link navigation ---------------------------------------------------------------


def to_results(engine, session, text=WORKED_QUERY):
    engine.submit_query(session, text=text)
    engine.confirm(session)
    assert session.state == RESULTS
    return engine.get_state(session)


def test_select_first_link_navigates(engine, session):
    snap = to_results(engine, session)
    target = snap["links"][0]["href"]
    engine.select_link(session, 1)
    assert session.state == NAVIGATED
    after = engine.get_state(session)
    assert engine.docs_by_id[after["page"]].url == target
    assert after["links"] is not None


def test_select_out_of_range_keeps_state(engine, session):
    snap = to_results(engine, session)
    count = len(snap["links"])
    with pytest.raises(RangeError):
        engine.select_link(session, count + 1)
    assert session.state == RESULTS
    assert engine.get_state(session) == snap


def test_select_chain_is_deterministic(engine, bundle, documents, templates):
    runs = []
    for _ in range(2):
        fresh = SessionEngine(bundle, documents, templates)
        s = fresh.create_session()
        to_results(fresh, s)
        fresh.select_link(s, 2)
        first = fresh.get_state(s)["page"]
        fresh.select_link(s, 2)
        runs.append((first, fresh.get_state(s)["page"]))
    assert runs[0] == runs[1]
    assert runs[0][0] != runs[0][1]


def test_select_dangling_url_keeps_state(bundle, documents, templates):
    from bolkhoj.search import Document, Link
    broken = Document(id="dx", url="local://dx", title="broken links doc",
                      body=("It mentions gold and price and more gold.",),
                      links=(Link("nowhere", "local://missing-doc"),))
    engine = SessionEngine(bundle, list(documents) + [broken], templates)
    session = engine.create_session()
    engine.submit_query(session, text="sone ka bhav kya hai")
    engine.confirm(session)
    assert engine.get_state(session)["page"] == "d02"
    # force navigation onto the broken doc first
    engine2 = SessionEngine(bundle, [broken], templates)
    s2 = engine2.create_session()
    engine2.submit_query(s2, text="sone ka bhav kya hai")
    engine2.confirm(s2)
    assert s2.state == RESULTS
    with pytest.raises(NavigationError):
        engine2.select_link(s2, 1)
    assert s2.state == RESULTS


def test_select_wrong_state(engine, session):
    with pytest.raises(StateError):
        engine.select_link(session, 1)


def test_new_query_allowed_from_results(engine, session):
    to_results(engine, session)
    engine.submit_query(session, text="sone ka bhav kya hai")
    assert session.state == RECOGNIZED


# -- snapshots and replay -------------------------------------------------------------


def test_snapshot_matches_post_state(engine, session):
    engine.submit_query(session, text=WORKED_QUERY)
    snap = engine.get_state(session)
    assert snap["state"] == RECOGNIZED
    assert snap["results"] is None and snap["answer"] is None


def test_replay_reproduces_snapshot(engine, session):
    engine.submit_query(session, text=WORKED_QUERY)
    engine.confirm(session)
    engine.select_link(session, 2)
    engine.select_link(session, 2)
    final = engine.get_state(session)
    replayed = engine.replay(list(session.history))
    final.pop("id")
    replayed.pop("id")
    assert replayed == final


def test_session_expires(bundle, documents, templates):
    now = [0.0]
    engine = SessionEngine(bundle, documents, templates, clock=lambda: now[0],
                           config=SessionConfig(idle_ttl_s=10.0))
    session = engine.create_session()
    now[0] = 5.0
    engine.get_state(session.id)  # touch keeps it alive
    now[0] = 14.0
    engine.get_state(session.id)
    now[0] = 30.0
    with pytest.raises(UnknownSessionError, match="expired"):
        engine.get_state(session.id)


# -- simulated recognition errors ------------------------------------------------------


def test_injected_substitution_asks_again_then_clean_query_succeeds(
        bundle, documents, templates):
    sim = ErrorSimulation(
        confusion=ConfusionModel({"dili": {"bili": 1.0}}, {}), seed=42)
    engine = SessionEngine(bundle, documents, templates,
                           config=SessionConfig(error_simulation=sim))
    session = engine.create_session()
    engine.submit_query(session, text=WORKED_QUERY)
    assert session.state == ASK_AGAIN
    assert "bili" in engine.get_state(session)["message"]
    # a query without confusable words passes untouched and completes
    engine.submit_query(session, text="bharat ki rajdhani kya hai")
    assert session.state == RECOGNIZED
    engine.confirm(session)
    assert session.state == RESULTS
    assert "delhi" in engine.get_state(session)["answer"]["hindi"]


def test_injection_free_path_is_default(engine, session):
    engine.submit_query(session, text="aaj dili ki mandi")
    assert engine.get_state(session)["hypothesis"]["words"] == ["aaj", "dili", "ki", "mandi"]


# -- state machine fuzz ------------------------------------------------------------------

LEGAL = {
    AWAIT_QUERY: {"query": {RECOGNIZED, ASK_AGAIN}},
    ASK_AGAIN: {"query": {RECOGNIZED, ASK_AGAIN}},
    RECOGNIZED: {"confirm": {RESULTS, NO_RESULTS, ASK_AGAIN}, "reject": {ASK_AGAIN}},
    RESULTS: {"query": {RECOGNIZED, ASK_AGAIN}, "select": {NAVIGATED}},
    NAVIGATED: {"query": {RECOGNIZED, ASK_AGAIN}, "select": {NAVIGATED}},
    NO_RESULTS: {"query": {RECOGNIZED, ASK_AGAIN}},
}

FUZZ_QUERIES = [WORKED_QUERY, "sone ka bhav kya hai", "kya hai", "999777",
                "bharat ki rajdhani kya hai", ""]


def test_random_event_fuzz_never_illegal(engine):
    rng = np.random.default_rng(99)
    ops = ["query", "confirm", "reject", "select"]
    for _ in range(200):
        session = engine.create_session()
        for _ in range(8):
            op = ops[rng.integers(len(ops))]
            before = session.state
            try:
                if op == "query":
                    engine.submit_query(session, text=FUZZ_QUERIES[rng.integers(len(FUZZ_QUERIES))])
                elif op == "confirm":
                    engine.confirm(session)
                elif op == "reject":
                    engine.reject(session)
                else:
                    engine.select_link(session, int(rng.integers(1, 5)))
            except (StateError, RangeError):
                assert session.state == before
                continue
            allowed = LEGAL[before].get(op)
            assert allowed is not None, (before, op)
            assert session.state in allowed, (before, op, session.state)

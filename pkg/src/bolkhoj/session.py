"""The interactive dialog loop as a state machine: recognize a query,
confirm or repeat, translate, search, present numbered links, navigate.

States: await_query, recognized, results, navigated, ask_again,
no_results.  Searching is a transient phase inside confirm() and never
observable.  Events within one session are serialized; distinct
sessions proceed concurrently.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .audio import AudioClip, FeatureConfig, extract_features
from .morphology import analyze_text
from .recognizer import (ConfusionModel, EMPTY_HYPOTHESIS, GrammarNetwork,
                         Hypothesis, WordSegment, decode,
                         inject_errors_with_flags)
from .resources import ResourceBundle
from .search import (Answer, Document, ResultPage, SearchIndex, build_query,
                     drop_stop_words, filter_answer, number_hyperlinks, search)
from .transfer import AnswerRenderer, realize_question, transfer_items

AWAIT_QUERY = "await_query"
RECOGNIZED = "recognized"
RESULTS = "results"
NAVIGATED = "navigated"
ASK_AGAIN = "ask_again"
NO_RESULTS = "no_results"

STATES = (AWAIT_QUERY, RECOGNIZED, RESULTS, NAVIGATED, ASK_AGAIN, NO_RESULTS)

# states from which a fresh query may be submitted
QUERYABLE = (AWAIT_QUERY, ASK_AGAIN, RESULTS, NAVIGATED, NO_RESULTS)
SELECTABLE = (RESULTS, NAVIGATED)

MSG_ASK_AGAIN = "Query not understood. Please repeat the query."
MSG_NO_RESULTS = "No results were found for the query. Please try another query."


class SessionError(Exception):
    pass


class StateError(SessionError):
    pass


class InputError(SessionError):
    pass


class RangeError(SessionError):
    pass


class NavigationError(SessionError):
    pass


class UnknownSessionError(SessionError):
    pass


class ConfigError(SessionError):
    pass


@dataclass(frozen=True)
class ErrorSimulation:
    """Simulated recognition errors for text submissions: injected edits
    carry a fixed sub-threshold confidence so the dialog retries."""
    confusion: ConfusionModel
    seed: int = 0
    corrupted_confidence: float = 0.25


@dataclass(frozen=True)
class SessionConfig:
    confidence_threshold: float = 0.4
    max_results: int = 10
    text_mode_allowed: bool = True
    idle_ttl_s: float = 1800.0
    error_simulation: ErrorSimulation | None = None

    def __post_init__(self):
        if not 0.0 < self.confidence_threshold < 1.0:
            raise ConfigError(f"confidence_threshold {self.confidence_threshold} outside (0, 1)")
        if self.max_results < 1:
            raise ConfigError("max_results must be >= 1")


@dataclass
class Session:
    id: str
    config: SessionConfig
    state: str = AWAIT_QUERY
    last_hypothesis: Hypothesis | None = None
    last_results: ResultPage | None = None
    last_answer: Answer | None = None
    current_page_id: str | None = None
    message: str | None = None
    history: list[tuple[str, object]] = field(default_factory=list)
    last_touch: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _sim_rng: np.random.Generator | None = field(default=None, repr=False)


class SessionEngine:
    """Holds the loaded resources, search core and (optionally) the
    recognition assets, and runs sessions over them."""

    def __init__(self, bundle: ResourceBundle, documents: Sequence[Document],
                 templates: Sequence[tuple[str, str]],
                 grammar: GrammarNetwork | None = None,
                 feature_config: FeatureConfig | None = None,
                 config: SessionConfig | None = None,
                 clock: Callable[[], float] = time.monotonic):
        self.bundle = bundle
        self.documents = list(documents)
        self.docs_by_id: dict[str, Document] = {d.id: d for d in self.documents}
        self.docs_by_url: dict[str, Document] = {d.url: d for d in self.documents}
        from .search import index_corpus
        self.index: SearchIndex = index_corpus(self.documents)
        self.renderer = AnswerRenderer(bundle, templates)
        self.grammar = grammar
        self.feature_config = feature_config or FeatureConfig()
        self.config = config or SessionConfig()
        self.clock = clock
        self._sessions: dict[str, Session] = {}
        self._store_lock = threading.Lock()

    # -- session store ------------------------------------------------

    def create_session(self, config: SessionConfig | None = None) -> Session:
        config = config or self.config
        session = Session(id=uuid.uuid4().hex, config=config, last_touch=self.clock())
        if config.error_simulation is not None:
            session._sim_rng = np.random.default_rng(config.error_simulation.seed)
        with self._store_lock:
            self._sessions[session.id] = session
        return session

    def _get(self, session_or_id) -> Session:
        if isinstance(session_or_id, Session):
            session = session_or_id
        else:
            with self._store_lock:
                session = self._sessions.get(session_or_id)
            if session is None:
                raise UnknownSessionError(f"unknown session '{session_or_id}'")
        now = self.clock()
        if now - session.last_touch > session.config.idle_ttl_s:
            with self._store_lock:
                self._sessions.pop(session.id, None)
            raise UnknownSessionError(f"session '{session.id}' expired")
        session.last_touch = now
        return session

    # -- operations ---------------------------------------------------

    def submit_query(self, session_or_id, text: str | None = None,
                     clip: AudioClip | None = None) -> Session:
        session = self._get(session_or_id)
        with session.lock:
            if session.state not in QUERYABLE:
                raise StateError(f"cannot submit a query in state '{session.state}'")
            if (text is None) == (clip is None):
                raise InputError("submit exactly one of text or audio")
            if text is not None:
                hypothesis = self._recognize_text(session, text)
                session.history.append(("query_text", text))
            else:
                hypothesis = self._recognize_audio(clip)
                session.history.append(("query_audio", clip.source_id))
            session.last_hypothesis = hypothesis
            session.last_answer = None
            if hypothesis.empty:
                session.state = ASK_AGAIN
                reason = " (no path)" if clip is not None else ""
                session.message = MSG_ASK_AGAIN + reason
            elif hypothesis.min_confidence() < session.config.confidence_threshold:
                low = min(hypothesis.segments, key=lambda s: s.confidence)
                session.state = ASK_AGAIN
                session.message = f"{MSG_ASK_AGAIN} (low confidence on '{low.word}')"
            else:
                session.state = RECOGNIZED
                session.message = None
            return session

    def _recognize_text(self, session: Session, text: str) -> Hypothesis:
        if not session.config.text_mode_allowed:
            raise InputError("text mode is disabled for this session")
        if not text.isascii():
            raise InputError("text queries must be romanized ASCII")
        tokens = text.lower().split()
        if not tokens:
            return EMPTY_HYPOTHESIS
        sim = session.config.error_simulation
        if sim is None:
            confidences = [1.0] * len(tokens)
        else:
            tokens, edited = inject_errors_with_flags(tokens, sim.confusion, session._sim_rng)
            if not tokens:
                return EMPTY_HYPOTHESIS
            confidences = [sim.corrupted_confidence if e else 1.0 for e in edited]
        segments = tuple(WordSegment(word=w, start_frame=i, end_frame=i + 1, confidence=c)
                         for i, (w, c) in enumerate(zip(tokens, confidences)))
        return Hypothesis(words=tuple(tokens), total_log_prob=0.0, segments=segments)

    def _recognize_audio(self, clip: AudioClip) -> Hypothesis:
        if self.grammar is None:
            raise InputError("audio mode unavailable: no acoustic models loaded")
        feats = extract_features(clip, self.feature_config)
        return decode(self.grammar, feats)

    def confirm(self, session_or_id) -> Session:
        session = self._get(session_or_id)
        with session.lock:
            if session.state != RECOGNIZED:
                raise StateError(f"confirm is only legal in state '{RECOGNIZED}', current state is '{session.state}'")
            session.history.append(("confirm", None))
            words = session.last_hypothesis.words
            record = analyze_text(" ".join(words), self.bundle.tagger("hi"),
                                  self.bundle.source_lexicon.auxiliaries)
            transferred = transfer_items(record, self.bundle.lex_h2e, self.bundle.paradigms_en)
            english = realize_question(transferred, record.removed_auxiliaries)
            keywords = drop_stop_words(english, self.bundle.stopwords)
            query = build_query(keywords, english)
            if query is None:
                session.state = ASK_AGAIN
                session.message = MSG_ASK_AGAIN
                return session
            hits = search(self.index, query, self.docs_by_id, k=session.config.max_results)
            if not hits:
                session.state = NO_RESULTS
                session.last_results = None
                session.message = MSG_NO_RESULTS
                return session
            top_doc = self.docs_by_id[hits[0].doc_id]
            page = ResultPage(hits=tuple(hits),
                              numbered_links=tuple(number_hyperlinks(top_doc)))
            session.last_results = page
            session.current_page_id = top_doc.id
            session.last_answer = filter_answer(hits, self.docs_by_id, query, self.renderer)
            session.state = RESULTS
            session.message = None
            return session

    def reject(self, session_or_id) -> Session:
        session = self._get(session_or_id)
        with session.lock:
            if session.state != RECOGNIZED:
                raise StateError(f"reject is only legal in state '{RECOGNIZED}', current state is '{session.state}'")
            session.history.append(("reject", None))
            session.last_hypothesis = None
            session.state = ASK_AGAIN
            session.message = MSG_ASK_AGAIN
            return session

    def select_link(self, session_or_id, n: int) -> Session:
        session = self._get(session_or_id)
        with session.lock:
            if session.state not in SELECTABLE:
                raise StateError(f"select is only legal in states {SELECTABLE}, current state is '{session.state}'")
            links = self._current_links(session)
            if not isinstance(n, int) or not 1 <= n <= len(links):
                raise RangeError(f"link number {n} outside 1..{len(links)}")
            target = self.docs_by_url.get(links[n - 1].href)
            if target is None:
                raise NavigationError(f"link target '{links[n - 1].href}' is not in the corpus")
            session.history.append(("select", n))
            session.current_page_id = target.id
            session.state = NAVIGATED
            session.message = None
            return session

    def _current_links(self, session: Session):
        if session.current_page_id is None:
            return []
        return number_hyperlinks(self.docs_by_id[session.current_page_id])

    def get_state(self, session_or_id) -> dict:
        session = self._get(session_or_id)
        with session.lock:
            return self.snapshot(session)

    def snapshot(self, session: Session) -> dict:
        hyp = None
        if session.last_hypothesis is not None and not session.last_hypothesis.empty:
            hyp = {"words": list(session.last_hypothesis.words),
                   "confidences": [round(s.confidence, 6) for s in session.last_hypothesis.segments]}
        results = None
        if session.last_results is not None and session.state in (RESULTS, NAVIGATED):
            results = [{"rank": i + 1, "number": i + 1, "title": h.title,
                        "url": h.url, "score": round(h.score, 6)}
                       for i, h in enumerate(session.last_results.hits)]
        links = None
        if session.state in (RESULTS, NAVIGATED):
            links = [{"number": l.number, "text": l.text, "href": l.href}
                     for l in self._current_links(session)]
        answer = None
        if session.last_answer is not None and session.state in (RESULTS, NAVIGATED):
            answer = {"english": session.last_answer.english_sentence,
                      "hindi": session.last_answer.hindi_rendering}
        return {
            "id": session.id,
            "state": session.state,
            "page": session.current_page_id if session.state in (RESULTS, NAVIGATED) else None,
            "hypothesis": hyp,
            "results": results,
            "links": links,
            "answer": answer,
            "message": session.message,
        }

    # -- replay -------------------------------------------------------

    def replay(self, events: Sequence[tuple[str, object]],
               config: SessionConfig | None = None,
               audio_resolver: Callable[[str], AudioClip] | None = None) -> dict:
        """Re-run an event log on a fresh session and return its final
        snapshot.  History records only applied events, so replay never
        trips a state error.  Audio events are referenced by source id
        and resolved through `audio_resolver`.  Snapshots are identical
        up to the session id."""
        session = self.create_session(config)
        for op, payload in events:
            if op == "query_text":
                self.submit_query(session, text=payload)
            elif op == "query_audio":
                if audio_resolver is None:
                    raise InputError(f"cannot replay audio event '{payload}' without an audio resolver")
                self.submit_query(session, clip=audio_resolver(payload))
            elif op == "confirm":
                self.confirm(session)
            elif op == "reject":
                self.reject(session)
            elif op == "select":
                self.select_link(session, payload)
            else:
                raise SessionError(f"unknown event '{op}'")
        return self.snapshot(session)

"""Word-model composition, the word-loop decoding network, token-passing
decoding with margin confidences, and recognition-error injection for
dialog testing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .hmm import LOG_ZERO, Hmm, concat_models, viterbi, _frames
from .resources import PhoneSet, PronLexicon, pronounce

DEFAULT_WORD_PENALTY = math.log(0.1)


class RecognizerError(ValueError):
    pass


@dataclass(frozen=True)
class WordModel:
    word: str
    units: tuple[str, ...]   # phone units after closure/release expansion
    model: Hmm


def compose_word_model(word: str, pron_lexicon: PronLexicon,
                       phone_hmms: Mapping[str, Hmm], phones: PhoneSet) -> WordModel:
    """Concatenate the word's phone models in pronunciation order.  Each
    phone model keeps its internal parameters; the cross-phone link
    carries the donor phone's final exit mass."""
    units = pronounce(word, pron_lexicon, phones)
    missing = [u for u in units if u not in phone_hmms]
    if missing:
        raise RecognizerError(f"word '{word}' uses untrained phones: {missing}")
    model = concat_models([phone_hmms[u] for u in units])
    return WordModel(word=word, units=units, model=model)


@dataclass
class GrammarNetwork:
    """The single decoding network over all word models.

    loop=True permits multi-word utterances, the re-entry edge paying
    word_penalty plus the next word's log prior.
    """
    word_models: tuple[WordModel, ...]
    word_log_priors: np.ndarray
    loop: bool = True
    word_penalty: float = DEFAULT_WORD_PENALTY
    end_penalty: float = 0.0
    _network: Hmm = field(init=False, repr=False)
    _state_word: np.ndarray = field(init=False, repr=False)
    _state_local: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        words = [wm.word for wm in self.word_models]
        if len(set(words)) != len(words):
            raise RecognizerError("grammar words must be unique")
        total_prior = np.exp(self.word_log_priors).sum()
        if abs(total_prior - 1.0) > 1e-9:
            raise RecognizerError(f"word priors sum to {total_prior}, expected 1")
        self._build()

    def _build(self):
        models = [wm.model for wm in self.word_models]
        sizes = [m.num_states for m in models]
        offsets = np.cumsum([0] + sizes[:-1])
        total = sum(sizes)
        init = np.full(total, LOG_ZERO)
        trans = np.full((total, total), LOG_ZERO)
        topology = np.zeros((total, total), dtype=bool)
        final = np.full(total, LOG_ZERO)
        self._state_word = np.empty(total, dtype=np.int64)
        self._state_local = np.empty(total, dtype=np.int64)
        for w, model in enumerate(models):
            o, n = offsets[w], sizes[w]
            self._state_word[o:o + n] = w
            self._state_local[o:o + n] = np.arange(n)
            init[o:o + n] = self.word_log_priors[w] + model.init_logp
            trans[o:o + n, o:o + n] = model.trans_logp
            topology[o:o + n, o:o + n] = model.topology
            final[o:o + n] = model.final_logp + self.end_penalty
        if self.loop:
            for w, donor in enumerate(models):
                o = offsets[w]
                for s in range(sizes[w]):
                    exit_mass = float(donor.final_logp[s])
                    if exit_mass == LOG_ZERO:
                        continue
                    for v, acceptor in enumerate(models):
                        vo = offsets[v]
                        entry = self.word_penalty + self.word_log_priors[v] + acceptor.init_logp
                        cross = exit_mass + entry
                        live = cross > LOG_ZERO
                        trans[o + s, vo:vo + sizes[v]] = np.where(
                            live, cross, trans[o + s, vo:vo + sizes[v]])
                        topology[o + s, vo:vo + sizes[v]] |= live
        means = np.vstack([m.means for m in models])
        variances = np.vstack([m.variances for m in models])
        floor = min(m.variance_floor for m in models)
        self._network = Hmm(init, trans, means, variances, topology, final, floor)

    @property
    def words(self) -> list[str]:
        return [wm.word for wm in self.word_models]


def build_grammar(word_models: Sequence[WordModel], priors: Mapping[str, float] | None = None,
                  loop: bool = True, word_penalty: float = DEFAULT_WORD_PENALTY,
                  end_penalty: float = 0.0) -> GrammarNetwork:
    """Uniform priors when none are given; given priors are normalised."""
    if not word_models:
        raise RecognizerError("grammar needs at least one word")
    n = len(word_models)
    if priors is None:
        log_priors = np.full(n, -math.log(n))
    else:
        weights = []
        for wm in word_models:
            w = priors.get(wm.word)
            if w is None or w <= 0:
                raise RecognizerError(f"prior for '{wm.word}' must be given and positive")
            weights.append(float(w))
        weights = np.array(weights)
        log_priors = np.log(weights / weights.sum())
    return GrammarNetwork(word_models=tuple(word_models), word_log_priors=log_priors,
                          loop=loop, word_penalty=word_penalty, end_penalty=end_penalty)


@dataclass(frozen=True)
class WordSegment:
    word: str
    start_frame: int
    end_frame: int   # exclusive
    confidence: float


@dataclass(frozen=True)
class Hypothesis:
    words: tuple[str, ...]
    total_log_prob: float
    segments: tuple[WordSegment, ...]

    @property
    def empty(self) -> bool:
        return not self.words

    def min_confidence(self) -> float:
        return min((s.confidence for s in self.segments), default=0.0)


EMPTY_HYPOTHESIS = Hypothesis(words=(), total_log_prob=LOG_ZERO, segments=())


def _segment_confidence(net: GrammarNetwork, obs: np.ndarray, seg_score: float,
                        word_idx: int, start: int, end: int) -> float:
    """exp(own avg frame log-prob minus the best competing word's avg on
    the same segment), clamped to [0, 1]."""
    length = end - start
    own_avg = seg_score / length
    best_other = LOG_ZERO
    for v, wm in enumerate(net.word_models):
        if v == word_idx:
            continue
        _, lp = viterbi(wm.model, obs[start:end])
        if lp > best_other:
            best_other = lp
    if best_other == LOG_ZERO:
        return 1.0
    margin = own_avg - best_other / length
    return 1.0 if margin >= 0 else float(math.exp(margin))


def decode(net: GrammarNetwork, obs) -> Hypothesis:
    """Token-passing Viterbi over the network.  No legal path yields the
    empty hypothesis with confidence 0."""
    frames = _frames(obs)
    path, total = viterbi(net._network, frames)
    if path is None:
        return EMPTY_HYPOTHESIS
    logb = net._network.emission_logpdf(frames)
    # split the state path into word segments at edges the word-internal
    # topology does not allow (word re-entry or a different word)
    boundaries = [0]
    for t in range(1, len(path)):
        prev, cur = path[t - 1], path[t]
        w_prev, w_cur = net._state_word[prev], net._state_word[cur]
        if w_prev != w_cur:
            boundaries.append(t)
            continue
        wm = net.word_models[w_prev].model
        if not wm.topology[net._state_local[prev], net._state_local[cur]]:
            boundaries.append(t)
    boundaries.append(len(path))
    segments = []
    words = []
    for b in range(len(boundaries) - 1):
        start, end = boundaries[b], boundaries[b + 1]
        w = int(net._state_word[path[start]])
        seg_score = float(logb[start, path[start]])
        for t in range(start + 1, end):
            seg_score += float(net._network.trans_logp[path[t - 1], path[t]])
            seg_score += float(logb[t, path[t]])
        conf = _segment_confidence(net, frames, seg_score, w, start, end)
        words.append(net.word_models[w].word)
        segments.append(WordSegment(word=net.word_models[w].word, start_frame=start,
                                    end_frame=end, confidence=conf))
    return Hypothesis(words=tuple(words), total_log_prob=total, segments=tuple(segments))


def hypothesis_to_text(hyp: Hypothesis) -> str:
    """Dump format: one `word start end confidence` line per segment
    plus a trailing `#total <logprob>` line."""
    lines = [f"{s.word} {s.start_frame} {s.end_frame} {s.confidence:.6f}" for s in hyp.segments]
    lines.append(f"#total {hyp.total_log_prob:.6f}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# recognition-error injection


@dataclass(frozen=True)
class ConfusionModel:
    """Substitution pairs and per-word deletion probabilities used to
    simulate recognition errors."""
    substitutions: Mapping[str, Mapping[str, float]]
    deletions: Mapping[str, float]

    def __post_init__(self):
        for word, repls in self.substitutions.items():
            total = 0.0
            for repl, p in repls.items():
                if not 0.0 <= p <= 1.0:
                    raise RecognizerError(f"substitution probability {p} for {word}->{repl} outside [0, 1]")
                total += p
            if total > 1.0 + 1e-12:
                raise RecognizerError(f"substitution probabilities for '{word}' exceed 1")
        for word, p in self.deletions.items():
            if not 0.0 <= p <= 1.0:
                raise RecognizerError(f"deletion probability {p} for '{word}' outside [0, 1]")

    def validate_vocabulary(self, lexicon: PronLexicon) -> None:
        for word, repls in self.substitutions.items():
            for token in (word, *repls):
                if token not in lexicon:
                    raise RecognizerError(f"confusion entry '{token}' is not a lexicon word")
        for word in self.deletions:
            if word not in lexicon:
                raise RecognizerError(f"confusion entry '{word}' is not a lexicon word")


def inject_errors_with_flags(tokens: Sequence[str], cm: ConfusionModel,
                             rng: np.random.Generator) -> tuple[list[str], list[bool]]:
    """At most one edit per token; the flag list marks edited survivors."""
    out: list[str] = []
    edited: list[bool] = []
    for token in tokens:
        repls = cm.substitutions.get(token)
        if repls:
            draw = rng.random()
            acc = 0.0
            hit = None
            for repl, p in repls.items():
                acc += p
                if draw < acc:
                    hit = repl
                    break
            if hit is not None:
                out.append(hit)
                edited.append(True)
                continue
        p_del = cm.deletions.get(token, 0.0)
        if p_del > 0.0 and rng.random() < p_del:
            continue  # token deleted
        out.append(token)
        edited.append(False)
    return out, edited


def inject_errors(tokens: Sequence[str], cm: ConfusionModel, seed) -> list[str]:
    """Deterministic for a fixed seed; identity when every probability
    is zero."""
    if not tokens:
        raise RecognizerError("token list is empty")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    out, _ = inject_errors_with_flags(tokens, cm, rng)
    return out

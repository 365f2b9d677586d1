"""Synthetic speech worlds.

The real recordings behind the original system are unavailable, so two
stand-ins cover testing and demos:

- a feature-space world: per-phone generator HMMs with well separated
  means emit cepstrum-like vectors directly; fresh monophone models are
  trained on sampled data and decoded against sampled utterances
  (the self-recognition experiment).
- a tone-audio world: each phone unit is rendered as a fixed sine tone
  so real WAV bytes flow through feature extraction, training and
  decoding end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .audio import AudioClip, CANONICAL_RATE, FeatureConfig, extract_features
from .evaluate import EvalReport, run_experiment
from .hmm import (Hmm, TrainConfig, baum_welch, concat_models, flat_start,
                  make_left_to_right, sample_natural, sample_with_states)
from .recognizer import GrammarNetwork, build_grammar, compose_word_model, decode
from .resources import ResourceBundle, pronounce

STATES_PER_PHONE = 3


def word_units(word: str, bundle: ResourceBundle) -> tuple[str, ...]:
    return pronounce(word, bundle.pron, bundle.phones)


# ---------------------------------------------------------------------------
# feature-space world


def build_generator_phones(units: list[str], dims: int, rng: np.random.Generator,
                           spread: float = 3.0) -> dict[str, Hmm]:
    """One 3-state left-to-right generator per unit, means drawn wide
    apart relative to unit variance."""
    return {unit: make_left_to_right(rng.normal(0.0, spread, (STATES_PER_PHONE, dims)),
                                     np.ones((STATES_PER_PHONE, dims)))
            for unit in units}


def train_phone_models(generators: dict[str, Hmm], rng: np.random.Generator,
                       samples_per_phone: int = 20,
                       train_cfg: TrainConfig | None = None) -> dict[str, Hmm]:
    """Sample each generator and fit a fresh monophone from flat start."""
    train_cfg = train_cfg or TrainConfig(max_iters=12)
    trained: dict[str, Hmm] = {}
    for unit in sorted(generators):
        gen = generators[unit]
        data = [sample_with_states(gen, int(rng.integers(6, 14)), rng)[0]
                for _ in range(samples_per_phone)]
        proto = flat_start(STATES_PER_PHONE, data, variance_floor=train_cfg.variance_floor)
        trained[unit] = baum_welch(proto, data, train_cfg).model
    return trained


@dataclass
class SelfRecognitionSetup:
    words: list[str]
    grammar: GrammarNetwork
    generator_words: dict[str, Hmm]
    rng: np.random.Generator


def build_self_recognition(bundle: ResourceBundle, words: list[str], seed: int,
                           dims: int = 6) -> SelfRecognitionSetup:
    rng = np.random.default_rng(seed)
    units = sorted({u for w in words for u in word_units(w, bundle)})
    generators = build_generator_phones(units, dims, rng)
    trained = train_phone_models(generators, rng)
    word_models = [compose_word_model(w, bundle.pron, trained, bundle.phones) for w in words]
    grammar = build_grammar(word_models, loop=True)
    generator_words = {w: concat_models([generators[u] for u in word_units(w, bundle)])
                       for w in words}
    return SelfRecognitionSetup(words=words, grammar=grammar,
                                generator_words=generator_words, rng=rng)


def sample_utterance(setup: SelfRecognitionSetup, max_words: int = 3) -> tuple[list[str], np.ndarray]:
    """1..max_words words drawn uniformly; frames sampled from the
    generator word models and concatenated."""
    rng = setup.rng
    count = int(rng.integers(1, max_words + 1))
    words = [setup.words[int(rng.integers(len(setup.words)))] for _ in range(count)]
    chunks = [sample_natural(setup.generator_words[w], rng)[0] for w in words]
    return words, np.vstack(chunks)


def run_self_recognition(bundle: ResourceBundle, words: list[str], seed: int,
                         num_utterances: int = 100, dims: int = 6) -> EvalReport:
    """Train on sampled data, decode sampled utterances, report sentence
    accuracy through the standard scorer."""
    setup = build_self_recognition(bundle, words, seed, dims)
    items = []
    for _ in range(num_utterances):
        ref, frames = sample_utterance(setup)
        items.append((ref, frames))

    def system(item, rng):
        _, frames = item
        return list(decode(setup.grammar, frames).words)

    groups = [("self", list(range(len(items))))]
    return run_experiment(items, system, groups, seed=seed)


# ---------------------------------------------------------------------------
# tone-audio world


TONE_UNIT_MS = 120
TONE_CLOSURE_MS = 60
TONE_AMPLITUDE = 0.45
TONE_CLOSURE_AMPLITUDE = 0.04
TONE_NOISE = 0.01


def unit_frequency(unit: str, bundle: ResourceBundle) -> float:
    """A fixed, unit-specific sine frequency; closures hum low."""
    order = list(bundle.phones.units)
    i = order.index(unit)
    if bundle.phones.kinds[unit] == "closure":
        return 90.0 + 7.0 * i
    return 300.0 + 55.0 * i


def synthesize_units(units, bundle: ResourceBundle, rng: np.random.Generator) -> AudioClip:
    rate = CANONICAL_RATE
    pieces = []
    for unit in units:
        closure = bundle.phones.kinds[unit] == "closure"
        dur_ms = TONE_CLOSURE_MS if closure else TONE_UNIT_MS
        amp = TONE_CLOSURE_AMPLITUDE if closure else TONE_AMPLITUDE
        n = int(rate * dur_ms / 1000)
        t = np.arange(n) / rate
        tone = amp * np.sin(2 * math.pi * unit_frequency(unit, bundle) * t)
        pieces.append(tone + rng.normal(0.0, TONE_NOISE, n))
    samples = np.clip(np.concatenate(pieces), -1.0, 1.0)
    return AudioClip(samples=samples, sample_rate_hz=rate, source_id="tone:" + "-".join(units))


def synthesize_word_audio(word: str, bundle: ResourceBundle,
                          rng: np.random.Generator) -> AudioClip:
    clip = synthesize_units(word_units(word, bundle), bundle, rng)
    return AudioClip(samples=clip.samples, sample_rate_hz=clip.sample_rate_hz,
                     source_id=f"tone:{word}")


def train_tone_models(bundle: ResourceBundle, words: list[str], seed: int = 7,
                      samples_per_unit: int = 6,
                      feature_config: FeatureConfig | None = None) -> dict[str, Hmm]:
    """Train per-unit monophones on features of synthesized unit tones."""
    cfg = feature_config or FeatureConfig()
    rng = np.random.default_rng(seed)
    units = sorted({u for w in words for u in word_units(w, bundle)})
    trained: dict[str, Hmm] = {}
    for unit in units:
        data = []
        for _ in range(samples_per_unit):
            clip = synthesize_units([unit], bundle, rng)
            data.append(extract_features(clip, cfg).frames)
        proto = flat_start(STATES_PER_PHONE, data, variance_floor=1e-2)
        trained[unit] = baum_welch(proto, data, TrainConfig(max_iters=8, variance_floor=1e-2)).model
    return trained


def build_tone_grammar(bundle: ResourceBundle, words: list[str], seed: int = 7,
                       feature_config: FeatureConfig | None = None) -> GrammarNetwork:
    models = train_tone_models(bundle, words, seed, feature_config=feature_config)
    word_models = [compose_word_model(w, bundle.pron, models, bundle.phones) for w in words]
    return build_grammar(word_models, loop=True)

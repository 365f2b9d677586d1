"""Morphological analysis: input normalisation, tagging into lexical
items, reverse morphology (surface -> root + features) and forward
morphology (root + features -> surface)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .features import EMPTY, FeatureSet, is_consistent, unify
from .resources import ParadigmTable, TaggerResources

MAX_ITEM_WORDS = 3  # longest multi-word lexical item the tagger considers


class InvalidFeaturesError(ValueError):
    pass


@dataclass(frozen=True)
class RemovedAuxiliary:
    word: str
    features: FeatureSet
    position: int  # index in the whitespace-normalised token stream


@dataclass(frozen=True)
class LexicalItem:
    surface: str
    root: str
    category: str
    features: FeatureSet
    span: tuple[int, int]  # [start, stop) over the normalised stream


@dataclass(frozen=True)
class AnalysisRecord:
    items: tuple[LexicalItem, ...]
    removed_auxiliaries: tuple[RemovedAuxiliary, ...]


def normalize(text: str, auxiliaries: Mapping[str, FeatureSet]) -> tuple[list[str], list[RemovedAuxiliary]]:
    """Lowercase, collapse whitespace runs, pull auxiliaries out of the
    stream recording their attributes and original positions."""
    raw = text.lower().split()
    tokens: list[str] = []
    removed: list[RemovedAuxiliary] = []
    for pos, word in enumerate(raw):
        if word in auxiliaries:
            removed.append(RemovedAuxiliary(word, auxiliaries[word], pos))
        else:
            tokens.append(word)
    return tokens, removed


def analyze(word: str, paradigms: ParadigmTable,
            root_categories: Mapping[str, frozenset]) -> tuple[str, FeatureSet]:
    """Reverse morphology: irregular override, else the longest matching
    suffix rule whose reconstructed root is in the lexicon, else the
    word itself with no features."""
    root, feats, _ = analyze_with_category(word, paradigms, root_categories)
    return root, feats


def analyze_with_category(word: str, paradigms: ParadigmTable,
                          root_categories: Mapping[str, frozenset]) -> tuple[str, FeatureSet, str | None]:
    irregular = paradigms.irregular_for_surface(word)
    if irregular is not None:
        return irregular.root, irregular.features, irregular.category
    candidates = sorted(paradigms.rules, key=lambda r: (-len(r.suffix), r.index))
    for rule in candidates:
        if not rule.suffix:
            continue  # the identity rule is the fall-through below
        if not word.endswith(rule.suffix) or len(word) <= len(rule.suffix):
            continue
        root = word[:len(word) - len(rule.suffix)] + rule.replacement
        if rule.category in root_categories.get(root, frozenset()):
            return root, rule.features, rule.category
    categories = root_categories.get(word, frozenset())
    category = sorted(categories)[0] if categories else None
    return word, EMPTY, category


def generate(root: str, features, paradigms: ParadigmTable,
             category: str | None = None) -> str:
    """Forward morphology.  Irregulars take precedence; otherwise the
    first rule in file order applies whose features are all requested
    and whose replacement matches the root's ending; otherwise the root
    is returned unchanged.

    Paradigm files list specific rules before general ones, so a bare
    request falls through to the identity rule.
    """
    features = frozenset(features)
    if not is_consistent(features):
        raise InvalidFeaturesError(f"conflicting features: {sorted(features)}")
    best = None
    for irr in paradigms.irregulars:
        if irr.root != root:
            continue
        if category is not None and irr.category != category:
            continue
        if irr.features <= features:
            if best is None or len(irr.features) > len(best.features):
                best = irr
    if best is not None:
        return best.surface
    for rule in paradigms.rules:
        if category is not None and rule.category != category:
            continue
        if not rule.features <= features:
            continue
        if rule.replacement and not root.endswith(rule.replacement):
            continue
        stem = root[:len(root) - len(rule.replacement)] if rule.replacement else root
        return stem + rule.suffix
    return root


def tag(tokens: Sequence[str], resources: TaggerResources,
        removed_auxiliaries: Sequence[RemovedAuxiliary] = ()) -> AnalysisRecord:
    """Split tokens into lexical items: greedy longest multi-word match
    against the direct lexicon first, then per-token analysis.  Unknown
    tokens degrade to category 'other' with themselves as root.

    Item spans are positions in the whitespace-normalised stream, i.e.
    the stream that still contained the removed auxiliaries, so that
    item spans plus auxiliary positions tile it exactly.
    """
    aux_positions = {aux.position for aux in removed_auxiliaries}
    total = len(tokens) + len(removed_auxiliaries)
    positions = [p for p in range(total) if p not in aux_positions]

    items: list[LexicalItem] = []
    i = 0
    while i < len(tokens):
        matched = False
        for width in range(min(MAX_ITEM_WORDS, len(tokens) - i), 1, -1):
            surface_words = tuple(tokens[i:i + width])
            entry = resources.direct.get(surface_words)
            if entry is None:
                continue
            span_positions = positions[i:i + width]
            if span_positions[-1] - span_positions[0] != width - 1:
                continue  # an auxiliary sat inside; not a contiguous item
            items.append(LexicalItem(
                surface=" ".join(surface_words), root=entry.root,
                category=entry.category, features=entry.features,
                span=(span_positions[0], span_positions[-1] + 1)))
            i += width
            matched = True
            break
        if matched:
            continue
        word = tokens[i]
        span = (positions[i], positions[i] + 1)
        entry = resources.direct.get((word,))
        if entry is not None:
            items.append(LexicalItem(word, entry.root, entry.category, entry.features, span))
        else:
            root, feats, category = analyze_with_category(word, resources.paradigms,
                                                          resources.root_categories)
            if category is None:
                items.append(LexicalItem(word, word, "other", EMPTY, span))
            else:
                if resources.inherent is not None:
                    merged = unify(feats, resources.inherent.inherent_features(root, category))
                    feats = merged if merged is not None else feats
                items.append(LexicalItem(word, root, category, feats, span))
        i += 1
    return AnalysisRecord(items=tuple(items), removed_auxiliaries=tuple(removed_auxiliaries))


def analyze_text(text: str, resources: TaggerResources,
                 auxiliaries: Mapping[str, FeatureSet]) -> AnalysisRecord:
    """normalize + tag in one step."""
    tokens, removed = normalize(text, auxiliaries)
    return tag(tokens, resources, removed)

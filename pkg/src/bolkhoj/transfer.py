"""Bilingual lexical transfer with feature-unification pruning, plus the
small template grammar that orders English question output and renders
Hindi answers.

Transfer collects the rules matching an item's (root, category), unifies
the item's features with each rule's constraints, prunes inconsistent
rules, and generates the target surface from the survivor with the most
constraint matches (ties broken by file order).  Items no rule survives
for emit an OOV marker that flows downstream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .features import FeatureSet, unify
from .morphology import AnalysisRecord, LexicalItem, analyze_with_category, generate
from .resources import BilingualLexicon, ParadigmTable, ResourceBundle, TransferRule

UNK_OPEN = "⟨unk:"
UNK_CLOSE = "⟩"

WH_ROOTS = {"kya": "what"}
GENITIVE_ROOTS = {"ka", "ki", "ke"}
ARTICLES = {"the", "a", "an"}

# copula chosen from the removed auxiliary's tense
COPULA_BY_TENSE = {"present": "is", "past": "was"}


def unk_marker(word: str) -> str:
    return f"{UNK_OPEN}{word}{UNK_CLOSE}"


def is_unk_marker(token: str) -> bool:
    return token.startswith(UNK_OPEN) and token.endswith(UNK_CLOSE)


@dataclass(frozen=True)
class TransferredItem:
    item: LexicalItem
    rule: TransferRule | None
    unified: FeatureSet
    surface: str  # target-language surface (may hold spaces), or an OOV marker

    @property
    def tokens(self) -> list[str]:
        return self.surface.split()


def transfer_item(item: LexicalItem, lexicon: BilingualLexicon,
                  paradigms_target: ParadigmTable) -> TransferredItem:
    if item.surface.isdigit():
        # numerals pass through untranslated
        return TransferredItem(item, None, item.features, item.surface)
    candidates = lexicon.candidates(item.root, item.category)
    if not candidates and item.category == "other":
        candidates = lexicon.candidates_any_category(item.root)
    survivors: list[tuple[int, int, TransferRule, FeatureSet]] = []
    for rule in candidates:
        unified = unify(item.features, rule.constraints)
        if unified is None:
            continue  # inconsistent features prune the rule
        matches = len(rule.constraints & item.features)
        survivors.append((-matches, rule.index, rule, unified))
    if not survivors:
        return TransferredItem(item, None, item.features, unk_marker(item.surface))
    survivors.sort(key=lambda s: (s[0], s[1]))
    _, _, rule, unified = survivors[0]
    surface = generate(rule.target_root, unified, paradigms_target, category=rule.category)
    return TransferredItem(item, rule, unified, surface)


def transfer_items(record: AnalysisRecord, lexicon: BilingualLexicon,
                   paradigms_target: ParadigmTable) -> list[TransferredItem]:
    return [transfer_item(item, lexicon, paradigms_target) for item in record.items]


# ---------------------------------------------------------------------------
# English question realisation


@dataclass
class _Chunk:
    kind: str          # 'np', 'adv', 'other'
    tokens: list[str]


def _article_for(t: TransferredItem) -> list[str]:
    """'the' before a common singular noun heading a phrase."""
    if t.item.category != "noun":
        return []
    if ("number", "plural") in t.unified:
        return []
    return ["the"]


def _is_genitive(t: TransferredItem) -> bool:
    return t.item.category == "postposition" and t.item.root in GENITIVE_ROOTS


def _is_locative(t: TransferredItem) -> bool:
    return t.item.category == "postposition" and t.item.root not in GENITIVE_ROOTS


def realize_question(transferred: Sequence[TransferredItem],
                     removed_auxiliaries=()) -> list[str]:
    """Order transferred items into an English token stream.

    Hindi genitive chains N1 (ka|ki|ke) N2 become 'N2 of N1' with the
    chain head carrying an article; a trailing locative postposition
    prefixes its phrase.  A wh item plus the removed sentence-final
    auxiliary select the question frame 'what <copula> NP PP* ADV*',
    which is the reversed chunk order of the Hindi input.  Without a wh
    item the chunks are emitted in source order.
    """
    wh_token: str | None = None
    chunks: list[_Chunk] = []
    i = 0
    items = list(transferred)
    while i < len(items):
        t = items[i]
        if t.item.root in WH_ROOTS:
            wh_token = t.surface if not is_unk_marker(t.surface) else WH_ROOTS[t.item.root]
            i += 1
            continue
        if t.item.category == "noun":
            chain = [t]
            links: list[str] = []
            j = i + 1
            while j + 1 < len(items) and _is_genitive(items[j]):
                k = j + 1
                if items[k].item.root in WH_ROOTS:  # floating wh inside the chain
                    wh_token = items[k].surface
                    k += 1
                    if k >= len(items) or items[k].item.category != "noun":
                        break
                links.append(items[j].surface)
                chain.append(items[k])
                j = k + 1
            head = chain[-1]
            tokens = _article_for(head) + head.tokens
            for linked, link in zip(reversed(chain[:-1]), reversed(links)):
                tokens += [link] + linked.tokens
            if j < len(items) and _is_locative(items[j]):
                tokens = items[j].tokens + tokens
                j += 1
            chunks.append(_Chunk("np", tokens))
            i = j
            continue
        if t.item.category == "adverb":
            chunks.append(_Chunk("adv", t.tokens))
        else:
            chunks.append(_Chunk("other", t.tokens))
        i += 1
    if wh_token is None:
        out: list[str] = []
        for chunk in chunks:
            out.extend(chunk.tokens)
        return out
    copula = "is"
    for aux in removed_auxiliaries:
        for attr, value in aux.features:
            if attr == "tense" and value in COPULA_BY_TENSE:
                copula = COPULA_BY_TENSE[value]
    out = [wh_token, copula]
    for chunk in reversed(chunks):
        out.extend(chunk.tokens)
    return out


def transfer(record: AnalysisRecord, lexicon: BilingualLexicon,
             paradigms_target: ParadigmTable) -> list[str]:
    """Transfer a tagged record into the target token list.  For the
    Hindi-to-English direction the question realiser orders the output;
    the reverse direction concatenates item by item."""
    transferred = transfer_items(record, lexicon, paradigms_target)
    if lexicon.direction == "h2e":
        return realize_question(transferred, record.removed_auxiliaries)
    out: list[str] = []
    for t in transferred:
        out.extend(t.tokens)
    return out


def translate_hi_to_en(text: str, bundle: ResourceBundle) -> list[str]:
    """Full source chain: normalise, tag, transfer, realise."""
    from .morphology import analyze_text
    record = analyze_text(text, bundle.tagger("hi"), bundle.source_lexicon.auxiliaries)
    return transfer(record, bundle.lex_h2e, bundle.paradigms_en)


# ---------------------------------------------------------------------------
# Hindi answer rendering


NUMERIC_PATTERNS = {"price"}
COPULA_SPLITS = (" stands for ", " means ", " is ", " are ")
_NUMBER_RE = re.compile(r"\d[\d,]*")


class AnswerRenderer:
    """Turns a retrieved English sentence into a Hindi answer line using
    the template table (pattern keyword -> Hindi frame with {1}/{2})."""

    def __init__(self, bundle: ResourceBundle, templates: Sequence[tuple[str, str]]):
        self.bundle = bundle
        self.templates = list(templates)

    def render(self, english_sentence: str, keywords: Sequence[str],
               raw_english: Sequence[str]) -> str:
        for pattern, template in self.templates:
            if pattern not in keywords:
                continue
            value = self._extract_value(english_sentence, numeric=pattern in NUMERIC_PATTERNS)
            if value is None:
                continue
            topic = self._topic_after(pattern, raw_english, keywords)
            slot1 = self._hindi_oblique(topic) if topic else ""
            rendered = template.replace("{1}", slot1).replace("{2}", value)
            return " ".join(rendered.split())
        return self._word_by_word(english_sentence)

    def _topic_after(self, pattern: str, raw_english: Sequence[str],
                     keywords: Sequence[str]) -> str | None:
        tokens = [t.lower() for t in raw_english]
        if pattern in tokens:
            i = tokens.index(pattern) + 1
            while i < len(tokens) and tokens[i] in ARTICLES | {"of"}:
                i += 1
            if i < len(tokens):
                return tokens[i]
        for kw in keywords:
            if kw != pattern:
                return kw
        return None

    def _hindi_oblique(self, word: str) -> str:
        """English word -> Hindi surface in the oblique (genitive) case."""
        root, _, category = analyze_with_category(word, self.bundle.paradigms_en,
                                                  self.bundle.english_root_categories)
        candidates = self.bundle.lex_e2h.candidates(root, category) if category else []
        if not candidates:
            candidates = self.bundle.lex_e2h.candidates_any_category(root)
        if not candidates:
            return word
        rule = sorted(candidates, key=lambda r: r.index)[0]
        return generate(rule.target_root, frozenset({("case", "oblique")}),
                        self.bundle.paradigms_hi, category=rule.category)

    @staticmethod
    def _extract_value(sentence: str, numeric: bool) -> str | None:
        if numeric:
            match = _NUMBER_RE.search(sentence)
            return match.group(0) if match else None
        lowered = sentence.lower()
        for splitter in COPULA_SPLITS:
            pos = lowered.find(splitter)
            if pos < 0:
                continue
            value = sentence[pos + len(splitter):].strip().rstrip(".?!").strip()
            words = value.split()
            while words and words[0].lower() in ARTICLES:
                words = words[1:]
            if words:
                return " ".join(words)
        return None

    def _word_by_word(self, sentence: str) -> str:
        out: list[str] = []
        for token in re.findall(r"[a-z0-9]+", sentence.lower()):
            if token in ARTICLES:
                continue
            root, feats, category = analyze_with_category(token, self.bundle.paradigms_en,
                                                          self.bundle.english_root_categories)
            candidates = (self.bundle.lex_e2h.candidates(root, category) if category else []) \
                or self.bundle.lex_e2h.candidates_any_category(root)
            if candidates:
                rule = sorted(candidates, key=lambda r: r.index)[0]
                unified = unify(feats, rule.constraints) or rule.constraints
                out.append(generate(rule.target_root, unified, self.bundle.paradigms_hi,
                                    category=rule.category))
            else:
                out.append(token)
        return " ".join(out)

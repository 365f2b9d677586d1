"""Static linguistic resources: phone set, pronunciation lexicon,
bilingual transfer lexicons, paradigm tables, the five-table source
lexicon with auxiliaries, stop words and the aligned query corpus.

Everything is loaded from a directory of UTF-8 tab-separated files (one
record per line, `#` comments allowed) and validated up front; a
violation aborts the load naming the file, line and rule.  Bundles are
immutable after load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping

from .features import (EMPTY, FeatureError, FeatureSet, format_features,
                       parse_features)

CATEGORIES = ("noun", "verb", "adjective", "adverb", "pronoun",
              "postposition", "interjection", "other")

PHONE_KINDS = ("vowel", "consonant", "closure", "release")

# the stop list must contain at least these
STOPWORD_MINIMUM = frozenset({"what", "is", "the", "of", "in", "a", "an", "to"})

SOURCE_LEXICON_FILES = ("hindi_root_lexicon.tsv", "hindi_verb_features.tsv",
                        "morphological_lexicon.tsv", "noun_features.tsv",
                        "suffixes.tsv", "auxiliaries.tsv")


class ResourceError(ValueError):
    def __init__(self, file: str, line: int | None, message: str):
        self.file = file
        self.line = line
        where = f"{file}:{line}" if line is not None else file
        super().__init__(f"{where}: {message}")


class OOVError(KeyError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"word not in pronunciation lexicon: '{word}'")


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class PhoneSet:
    units: tuple[str, ...]
    kinds: Mapping[str, str]
    # plosive release label -> (closure unit, release unit)
    closure_release_pairs: Mapping[str, tuple[str, str]]

    def __len__(self) -> int:
        return len(self.units)

    def __contains__(self, unit: str) -> bool:
        return unit in self.kinds

    @property
    def extra_vowels(self) -> tuple[str, ...]:
        return tuple(u for u in self.units if u == "ae")

    def expand(self, phone: str) -> tuple[str, ...]:
        """A plosive label expands to its closure/release pair; any other
        unit stands for itself."""
        pair = self.closure_release_pairs.get(phone)
        return pair if pair else (phone,)


@dataclass(frozen=True)
class PronLexicon:
    entries: Mapping[str, tuple[str, ...]]

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class TransferRule:
    source_root: str
    target_root: str
    category: str
    constraints: FeatureSet
    index: int  # file order, the deterministic tie-break


@dataclass(frozen=True)
class BilingualLexicon:
    direction: str  # 'h2e' or 'e2h'
    rules: tuple[TransferRule, ...]

    def candidates(self, root: str, category: str) -> list[TransferRule]:
        return [r for r in self.rules if r.source_root == root and r.category == category]

    def candidates_any_category(self, root: str) -> list[TransferRule]:
        return [r for r in self.rules if r.source_root == root]


@dataclass(frozen=True)
class SuffixRule:
    category: str
    suffix: str
    replacement: str
    features: FeatureSet
    index: int


@dataclass(frozen=True)
class Irregular:
    category: str
    surface: str
    root: str
    features: FeatureSet
    index: int


@dataclass(frozen=True)
class ParadigmTable:
    rules: tuple[SuffixRule, ...]
    irregulars: tuple[Irregular, ...]

    def irregular_for_surface(self, surface: str) -> Irregular | None:
        for irr in self.irregulars:
            if irr.surface == surface:
                return irr
        return None


@dataclass(frozen=True)
class DirectEntry:
    lang: str
    surface: tuple[str, ...]  # one or more words
    root: str
    category: str
    features: FeatureSet
    index: int


@dataclass(frozen=True)
class SourceLexicon:
    """The five tables plus auxiliaries: root lexicon, verb features,
    morphological (direct surface) lexicon, noun features, suffix
    inventory, auxiliary words."""
    root_categories: Mapping[str, frozenset]       # hindi root -> categories
    verb_features: Mapping[str, FeatureSet]
    noun_features: Mapping[str, FeatureSet]
    direct_entries: tuple[DirectEntry, ...]
    suffix_inventory: tuple[tuple[str, str], ...]  # (suffix, category)
    auxiliaries: Mapping[str, FeatureSet]

    def inherent_features(self, root: str, category: str) -> FeatureSet:
        if category == "noun":
            return self.noun_features.get(root, EMPTY)
        if category == "verb":
            return self.verb_features.get(root, EMPTY)
        return EMPTY


@dataclass(frozen=True)
class StopWordList:
    words: frozenset

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class AlignedPair:
    hindi: tuple[str, ...]
    english: tuple[str, ...]
    alignment: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class QueryCorpus:
    pairs: tuple[AlignedPair, ...]

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class TaggerResources:
    """Per-language view the tagger consumes: direct multi-word entries,
    root categories, paradigms and inherent root features."""
    lang: str
    direct: Mapping[tuple[str, ...], DirectEntry]
    root_categories: Mapping[str, frozenset]
    paradigms: ParadigmTable
    inherent: SourceLexicon | None  # None on the English side


@dataclass(frozen=True)
class ResourceBundle:
    phones: PhoneSet
    pron: PronLexicon
    lex_h2e: BilingualLexicon
    lex_e2h: BilingualLexicon
    paradigms_hi: ParadigmTable
    paradigms_en: ParadigmTable
    source_lexicon: SourceLexicon
    stopwords: StopWordList
    corpus: QueryCorpus
    english_root_categories: Mapping[str, frozenset] = field(default_factory=dict)

    def tagger(self, lang: str) -> TaggerResources:
        direct = {e.surface: e for e in self.source_lexicon.direct_entries if e.lang == lang}
        if lang == "hi":
            return TaggerResources("hi", direct, self.source_lexicon.root_categories,
                                   self.paradigms_hi, self.source_lexicon)
        if lang == "en":
            return TaggerResources("en", direct, self.english_root_categories,
                                   self.paradigms_en, None)
        raise ValueError(f"unknown language '{lang}'")

    def oov_report(self) -> list[str]:
        """Corpus Hindi tokens with no pronunciation entry, sorted."""
        missing = set()
        for pair in self.corpus.pairs:
            for token in pair.hindi:
                if token not in self.pron:
                    missing.add(token)
        return sorted(missing)


# ---------------------------------------------------------------------------
# parsing helpers


def _rows(path: Path) -> Iterator[tuple[int, list[str]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line.split("\t")


def _need(path: Path, lineno: int, row: list[str], count: int) -> list[str]:
    if len(row) < count:
        raise ResourceError(path.name, lineno, f"expected {count} tab-separated fields, got {len(row)}")
    return [f.strip() for f in row]


def _features_or_error(path: Path, lineno: int, text: str) -> FeatureSet:
    try:
        return parse_features(text)
    except FeatureError as exc:
        raise ResourceError(path.name, lineno, str(exc)) from exc


def _check_category(path: Path, lineno: int, category: str) -> str:
    if category not in CATEGORIES:
        raise ResourceError(path.name, lineno, f"unknown category '{category}'")
    return category


# ---------------------------------------------------------------------------
# per-file loaders


def _load_phones(path: Path) -> PhoneSet:
    units: list[str] = []
    kinds: dict[str, str] = {}
    base: dict[str, str] = {}
    for lineno, row in _rows(path):
        unit, kind, *rest = _need(path, lineno, row, 2)
        if unit in kinds:
            raise ResourceError(path.name, lineno, f"duplicate phone id '{unit}'")
        if kind not in PHONE_KINDS:
            raise ResourceError(path.name, lineno, f"unknown phone kind '{kind}'")
        units.append(unit)
        kinds[unit] = kind
        if kind in ("closure", "release"):
            if not rest or not rest[0]:
                raise ResourceError(path.name, lineno, f"{kind} unit '{unit}' needs a base_plosive")
            base[unit] = rest[0]
    closures_by_base = {base[u]: u for u in units if kinds[u] == "closure"}
    pairs: dict[str, tuple[str, str]] = {}
    for unit in units:
        if kinds[unit] != "release":
            continue
        closure = closures_by_base.get(base[unit])
        if closure is None:
            raise ResourceError(path.name, None, f"release '{unit}' has no closure for base '{base[unit]}'")
        if closure == unit:
            raise ResourceError(path.name, None, f"plosive '{unit}' must map to two distinct units")
        pairs[unit] = (closure, unit)
    if "ae" not in kinds:
        raise ResourceError(path.name, None, "phone set must include the borrowed vowel 'ae'")
    return PhoneSet(units=tuple(units), kinds=kinds, closure_release_pairs=pairs)


def _load_pron(path: Path, phones: PhoneSet) -> PronLexicon:
    entries: dict[str, tuple[str, ...]] = {}
    for lineno, row in _rows(path):
        word, pron = _need(path, lineno, row, 2)
        if word != word.lower():
            raise ResourceError(path.name, lineno, f"word '{word}' must be lowercase")
        if word in entries:
            raise ResourceError(path.name, lineno, f"duplicate word '{word}'")
        units = tuple(pron.split())
        if not units:
            raise ResourceError(path.name, lineno, f"empty pronunciation for '{word}'")
        for unit in units:
            if unit not in phones:
                raise ResourceError(path.name, lineno, f"unknown phone '{unit}' in entry for '{word}'")
        entries[word] = units
    return PronLexicon(entries=entries)


def _load_bilingual(path: Path, direction: str) -> BilingualLexicon:
    rules: list[TransferRule] = []
    seen: set[tuple] = set()
    for lineno, row in _rows(path):
        src, tgt, category, *rest = _need(path, lineno, row, 3)
        category = _check_category(path, lineno, category)
        constraints = _features_or_error(path, lineno, rest[0] if rest else "")
        key = (src, category, constraints)
        if key in seen:
            raise ResourceError(path.name, lineno,
                                f"duplicate transfer rule for ('{src}', {category}, {format_features(constraints) or '{}'})")
        if not tgt:
            raise ResourceError(path.name, lineno, f"empty target for '{src}'")
        seen.add(key)
        rules.append(TransferRule(src, tgt, category, constraints, len(rules)))
    return BilingualLexicon(direction=direction, rules=tuple(rules))


def _load_paradigms(path: Path) -> ParadigmTable:
    rules: list[SuffixRule] = []
    irregulars: list[Irregular] = []
    seen_rules: set[tuple[str, str]] = set()
    seen_irr: set[tuple[str, str]] = set()
    for lineno, row in _rows(path):
        category, suffix, replacement, *rest = _need(path, lineno, row, 3)
        category = _check_category(path, lineno, category)
        feats = _features_or_error(path, lineno, rest[0] if rest else "")
        if suffix.startswith("*"):
            surface = suffix[1:]
            if not surface:
                raise ResourceError(path.name, lineno, "irregular surface is empty")
            if (category, surface) in seen_irr:
                raise ResourceError(path.name, lineno, f"duplicate irregular '{surface}'")
            seen_irr.add((category, surface))
            irregulars.append(Irregular(category, surface, replacement, feats, len(irregulars)))
        else:
            if (category, suffix) in seen_rules:
                raise ResourceError(path.name, lineno, f"duplicate rule ({category}, '{suffix}')")
            seen_rules.add((category, suffix))
            rules.append(SuffixRule(category, suffix, replacement, feats, len(rules)))
    categories = {r.category for r in rules}
    for category in categories:
        if (category, "") not in seen_rules:
            raise ResourceError(path.name, None, f"category '{category}' lacks the empty-suffix identity rule")
    return ParadigmTable(rules=tuple(rules), irregulars=tuple(irregulars))


def _load_source_lexicon(dirpath: Path) -> SourceLexicon:
    for name in SOURCE_LEXICON_FILES:
        if not (dirpath / name).exists():
            raise ResourceError(str(dirpath / name), None, "missing file")

    roots: dict[str, set] = {}
    path = dirpath / "hindi_root_lexicon.tsv"
    for lineno, row in _rows(path):
        root, category = _need(path, lineno, row, 2)[:2]
        category = _check_category(path, lineno, category)
        if category in roots.get(root, set()):
            raise ResourceError(path.name, lineno, f"duplicate root entry ('{root}', {category})")
        roots.setdefault(root, set()).add(category)

    def load_feature_table(name: str, required_category: str) -> dict[str, FeatureSet]:
        table: dict[str, FeatureSet] = {}
        p = dirpath / name
        for lineno, row in _rows(p):
            root, feats_text = _need(p, lineno, row, 2)[:2]
            if root not in roots:
                raise ResourceError(p.name, lineno, f"root '{root}' not in hindi_root_lexicon")
            if required_category not in roots[root]:
                raise ResourceError(p.name, lineno, f"root '{root}' is not a {required_category}")
            if root in table:
                raise ResourceError(p.name, lineno, f"duplicate root '{root}'")
            table[root] = _features_or_error(p, lineno, feats_text)
        return table

    verb_features = load_feature_table("hindi_verb_features.tsv", "verb")
    noun_features = load_feature_table("noun_features.tsv", "noun")

    direct: list[DirectEntry] = []
    seen_direct: set[tuple[str, tuple[str, ...]]] = set()
    path = dirpath / "morphological_lexicon.tsv"
    for lineno, row in _rows(path):
        lang, surface, root, category, *rest = _need(path, lineno, row, 4)
        if lang not in ("hi", "en"):
            raise ResourceError(path.name, lineno, f"unknown language '{lang}'")
        category = _check_category(path, lineno, category)
        words = tuple(surface.split())
        if not words:
            raise ResourceError(path.name, lineno, "empty surface")
        if (lang, words) in seen_direct:
            raise ResourceError(path.name, lineno, f"duplicate surface '{surface}'")
        if lang == "hi" and root not in roots:
            raise ResourceError(path.name, lineno, f"root '{root}' not in hindi_root_lexicon")
        seen_direct.add((lang, words))
        feats = _features_or_error(path, lineno, rest[0] if rest else "")
        direct.append(DirectEntry(lang, words, root, category, feats, len(direct)))

    suffix_inventory: list[tuple[str, str]] = []
    path = dirpath / "suffixes.tsv"
    for lineno, row in _rows(path):
        suffix, category = _need(path, lineno, row, 2)[:2]
        category = _check_category(path, lineno, category)
        if (suffix, category) in suffix_inventory:
            raise ResourceError(path.name, lineno, f"duplicate suffix ('{suffix}', {category})")
        suffix_inventory.append((suffix, category))

    auxiliaries: dict[str, FeatureSet] = {}
    path = dirpath / "auxiliaries.tsv"
    for lineno, row in _rows(path):
        word, *rest = _need(path, lineno, row, 1)
        if word in auxiliaries:
            raise ResourceError(path.name, lineno, f"duplicate auxiliary '{word}'")
        auxiliaries[word] = _features_or_error(path, lineno, rest[0] if rest else "")

    return SourceLexicon(
        root_categories={r: frozenset(cats) for r, cats in roots.items()},
        verb_features=verb_features,
        noun_features=noun_features,
        direct_entries=tuple(direct),
        suffix_inventory=tuple(suffix_inventory),
        auxiliaries=auxiliaries,
    )


def _load_stopwords(path: Path) -> StopWordList:
    words: set[str] = set()
    for lineno, row in _rows(path):
        word = row[0].strip().lower()
        if word:
            words.add(word)
    if not words:
        raise ResourceError(path.name, None, "stop word list empty")
    missing = STOPWORD_MINIMUM - words
    if missing:
        raise ResourceError(path.name, None, f"stop word list lacks required words: {sorted(missing)}")
    return StopWordList(words=frozenset(words))


def _load_corpus(path: Path) -> QueryCorpus:
    pairs: list[AlignedPair] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ResourceError(path.name, lineno, f"invalid JSON: {exc}") from exc
            hindi = tuple(obj.get("hindi", ()))
            english = tuple(obj.get("english", ()))
            alignment = tuple((int(h), int(e)) for h, e in obj.get("alignment", ()))
            if not hindi or not english:
                raise ResourceError(path.name, lineno, "corpus pair has an empty side")
            for h, e in alignment:
                if not (0 <= h < len(hindi) and 0 <= e < len(english)):
                    raise ResourceError(path.name, lineno, f"alignment ({h}, {e}) out of range")
            pairs.append(AlignedPair(hindi, english, alignment))
    return QueryCorpus(pairs=tuple(pairs))


# ---------------------------------------------------------------------------
# bundle load / save


def load_resources(dirpath) -> ResourceBundle:
    """Load and validate every resource file in `dirpath`."""
    dirpath = Path(dirpath)
    for name in ("phones.tsv", "pron.tsv", "lex_h2e.tsv", "lex_e2h.tsv",
                 "paradigms_hi.tsv", "paradigms_en.tsv", "stopwords.txt", "corpus.jsonl"):
        if not (dirpath / name).exists():
            raise ResourceError(name, None, "missing file")
    phones = _load_phones(dirpath / "phones.tsv")
    pron = _load_pron(dirpath / "pron.tsv", phones)
    lex_h2e = _load_bilingual(dirpath / "lex_h2e.tsv", "h2e")
    lex_e2h = _load_bilingual(dirpath / "lex_e2h.tsv", "e2h")
    paradigms_hi = _load_paradigms(dirpath / "paradigms_hi.tsv")
    paradigms_en = _load_paradigms(dirpath / "paradigms_en.tsv")
    source_lexicon = _load_source_lexicon(dirpath / "source_lexicon")
    stopwords = _load_stopwords(dirpath / "stopwords.txt")
    corpus = _load_corpus(dirpath / "corpus.jsonl")

    english_roots: dict[str, set] = {}
    for rule in lex_e2h.rules:
        english_roots.setdefault(rule.source_root, set()).add(rule.category)
    for rule in lex_h2e.rules:
        english_roots.setdefault(rule.target_root, set()).add(rule.category)
    for irr in paradigms_en.irregulars:
        english_roots.setdefault(irr.root, set()).add(irr.category)
    for entry in source_lexicon.direct_entries:
        if entry.lang == "en":
            english_roots.setdefault(entry.root, set()).add(entry.category)

    return ResourceBundle(
        phones=phones, pron=pron, lex_h2e=lex_h2e, lex_e2h=lex_e2h,
        paradigms_hi=paradigms_hi, paradigms_en=paradigms_en,
        source_lexicon=source_lexicon, stopwords=stopwords, corpus=corpus,
        english_root_categories={r: frozenset(c) for r, c in english_roots.items()},
    )


def save_resources(bundle: ResourceBundle, dirpath) -> None:
    """Write the bundle back in canonical form: sorted records, features
    rendered k=v;k=v in attribute order.  load(save(load(d))) is
    byte-identical to save(load(d))."""
    dirpath = Path(dirpath)
    dirpath.mkdir(parents=True, exist_ok=True)
    (dirpath / "source_lexicon").mkdir(exist_ok=True)

    def write(name: str, lines: list[str]) -> None:
        with open(dirpath / name, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))

    phones = bundle.phones
    # a closure family's base key is its alphabetically first release, so
    # closure and release rows join on the same base at load time
    by_closure: dict[str, list[str]] = {}
    for release, (closure, _) in phones.closure_release_pairs.items():
        by_closure.setdefault(closure, []).append(release)
    base_of: dict[str, str] = {}
    for closure, releases in by_closure.items():
        base = sorted(releases)[0]
        base_of[closure] = base
        for release in releases:
            base_of[release] = base
    lines = []
    for unit in phones.units:
        kind = phones.kinds[unit]
        if kind in ("closure", "release"):
            lines.append(f"{unit}\t{kind}\t{base_of[unit]}")
        else:
            lines.append(f"{unit}\t{kind}")
    write("phones.tsv", lines)

    write("pron.tsv", [f"{w}\t{' '.join(p)}" for w, p in sorted(bundle.pron.entries.items())])

    for name, lex in (("lex_h2e.tsv", bundle.lex_h2e), ("lex_e2h.tsv", bundle.lex_e2h)):
        write(name, [f"{r.source_root}\t{r.target_root}\t{r.category}\t{format_features(r.constraints)}"
                     for r in lex.rules])

    for name, table in (("paradigms_hi.tsv", bundle.paradigms_hi), ("paradigms_en.tsv", bundle.paradigms_en)):
        lines = [f"{r.category}\t{r.suffix}\t{r.replacement}\t{format_features(r.features)}"
                 for r in table.rules]
        lines += [f"{i.category}\t*{i.surface}\t{i.root}\t{format_features(i.features)}"
                  for i in table.irregulars]
        write(name, lines)

    src = bundle.source_lexicon
    root_lines = []
    for root in sorted(src.root_categories):
        for category in sorted(src.root_categories[root]):
            root_lines.append(f"{root}\t{category}")
    write("source_lexicon/hindi_root_lexicon.tsv", root_lines)
    write("source_lexicon/hindi_verb_features.tsv",
          [f"{r}\t{format_features(f)}" for r, f in sorted(src.verb_features.items())])
    write("source_lexicon/noun_features.tsv",
          [f"{r}\t{format_features(f)}" for r, f in sorted(src.noun_features.items())])
    write("source_lexicon/morphological_lexicon.tsv",
          [f"{e.lang}\t{' '.join(e.surface)}\t{e.root}\t{e.category}\t{format_features(e.features)}"
           for e in src.direct_entries])
    write("source_lexicon/suffixes.tsv", [f"{s}\t{c}" for s, c in src.suffix_inventory])
    write("source_lexicon/auxiliaries.tsv",
          [f"{w}\t{format_features(f)}" for w, f in sorted(src.auxiliaries.items())])

    write("stopwords.txt", sorted(bundle.stopwords.words))

    with open(dirpath / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for pair in bundle.corpus.pairs:
            fh.write(json.dumps({"hindi": list(pair.hindi),
                                 "english": list(pair.english),
                                 "alignment": [list(a) for a in pair.alignment]},
                                ensure_ascii=False, sort_keys=True) + "\n")


def pronounce(word: str, lex: PronLexicon, phones: PhoneSet) -> tuple[str, ...]:
    """Lexicon pronunciation with plosives expanded to closure+release."""
    entry = lex.entries.get(word)
    if entry is None:
        raise OOVError(word)
    out: list[str] = []
    for unit in entry:
        out.extend(phones.expand(unit))
    return tuple(out)


def default_data_dir() -> Path:
    return Path(__file__).resolve().parent / "data"


def load_default_resources() -> ResourceBundle:
    return load_resources(default_data_dir())

"""Keyword query construction and the local search core: stop-word
dropping, a TF-IDF inverted index, numbered hyperlinks and sentence
level answer filtering."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .resources import StopWordList
from .transfer import AnswerRenderer, is_unk_marker

TOKEN_RE = re.compile(r"[a-z0-9]+")


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class Link:
    text: str
    href: str


@dataclass(frozen=True)
class Document:
    id: str
    url: str
    title: str
    body: tuple[str, ...]      # sentences
    links: tuple[Link, ...] = ()


@dataclass(frozen=True)
class Query:
    keywords: tuple[str, ...]
    raw_english: tuple[str, ...]


@dataclass(frozen=True)
class Posting:
    doc_id: str
    tf: int


@dataclass(frozen=True)
class SearchIndex:
    postings: Mapping[str, tuple[Posting, ...]]  # sorted by doc id
    num_docs: int

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))


@dataclass(frozen=True)
class Hit:
    doc_id: str
    score: float
    title: str
    url: str


@dataclass(frozen=True)
class NumberedLink:
    number: int
    text: str
    href: str


@dataclass(frozen=True)
class ResultPage:
    hits: tuple[Hit, ...]
    numbered_links: tuple[NumberedLink, ...]  # the top hit's links, numbered


@dataclass(frozen=True)
class Answer:
    english_sentence: str
    hindi_rendering: str
    source_doc_id: str


def tokenize(text: str) -> list[str]:
    return TOKEN_RE.findall(text.lower())


def drop_stop_words(tokens: Sequence[str], stop: StopWordList) -> list[str]:
    """Order-preserving removal of stop words and OOV markers; duplicates
    collapse keeping the first occurrence."""
    seen: set[str] = set()
    out: list[str] = []
    for token in tokens:
        word = token.lower()
        if word in stop or is_unk_marker(token):
            continue
        if word in seen:
            continue
        seen.add(word)
        out.append(word)
    return out


def build_query(keywords: Sequence[str], raw_english: Sequence[str] = ()) -> Query | None:
    """A Query, or None as the ask-again signal when no keyword is left."""
    if not keywords:
        return None
    return Query(keywords=tuple(keywords), raw_english=tuple(raw_english))


def load_documents(path) -> list[Document]:
    docs: list[Document] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            links = tuple(Link(l["text"], l["href"]) for l in obj.get("links", ()))
            docs.append(Document(id=obj["id"], url=obj["url"], title=obj["title"],
                                 body=tuple(obj["body"]), links=links))
    return docs


def save_documents(docs: Sequence[Document], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps({
                "id": doc.id, "url": doc.url, "title": doc.title,
                "body": list(doc.body),
                "links": [{"text": l.text, "href": l.href} for l in doc.links],
            }, ensure_ascii=False, sort_keys=True) + "\n")


def index_corpus(docs: Sequence[Document]) -> SearchIndex:
    seen_ids: set[str] = set()
    counts: dict[str, dict[str, int]] = {}
    for doc in docs:
        if doc.id in seen_ids:
            raise SearchError(f"duplicate document id '{doc.id}'")
        seen_ids.add(doc.id)
        text = " ".join((doc.title,) + doc.body)
        for term in tokenize(text):
            counts.setdefault(term, {}).setdefault(doc.id, 0)
            counts[term][doc.id] += 1
    postings = {term: tuple(Posting(doc_id, tf) for doc_id, tf in sorted(by_doc.items()))
                for term, by_doc in counts.items()}
    return SearchIndex(postings=postings, num_docs=len(docs))


def search(index: SearchIndex, query: Query, docs_by_id: Mapping[str, Document],
           k: int = 10) -> list[Hit]:
    """score(doc) = sum over keywords of tf * log((1+N)/(1+df)); ties
    break toward the ascending document id; top-k only."""
    if k < 1:
        raise SearchError("k must be >= 1")
    # a document is a candidate when it matches at least one keyword; a
    # term present in every document contributes idf 0 but still matches
    scores: dict[str, float] = {}
    for term in query.keywords:
        plist = index.postings.get(term, ())
        if not plist:
            continue
        idf = math.log((1 + index.num_docs) / (1 + len(plist)))
        for posting in plist:
            scores[posting.doc_id] = scores.get(posting.doc_id, 0.0) + posting.tf * idf
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    hits = []
    for doc_id, score in ranked:
        doc = docs_by_id[doc_id]
        hits.append(Hit(doc_id=doc_id, score=score, title=doc.title, url=doc.url))
    return hits


def number_hyperlinks(doc: Document) -> list[NumberedLink]:
    """Numbers 1..L over the document's links in document order."""
    return [NumberedLink(number=i + 1, text=link.text, href=link.href)
            for i, link in enumerate(doc.links)]


def filter_answer(hits: Sequence[Hit], docs_by_id: Mapping[str, Document],
                  query: Query, renderer: AnswerRenderer) -> Answer | None:
    """Pick the top hit's sentence with the highest keyword overlap
    (earliest sentence on ties); fall back to the title when nothing
    overlaps.  Returns None when there are no hits."""
    if not hits:
        return None
    doc = docs_by_id[hits[0].doc_id]
    keywords = set(query.keywords)
    best_sentence = None
    best_overlap = 0
    for sentence in doc.body:
        overlap = len(keywords & set(tokenize(sentence)))
        if overlap > best_overlap:
            best_overlap = overlap
            best_sentence = sentence
    english = best_sentence if best_sentence is not None else doc.title
    hindi = renderer.render(english, query.keywords, query.raw_english)
    return Answer(english_sentence=english, hindi_rendering=hindi, source_doc_id=doc.id)


def load_templates(path) -> list[tuple[str, str]]:
    """templates.tsv rows: pattern_keyword, hindi template with {1}/{2}."""
    templates: list[tuple[str, str]] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise SearchError(f"templates.tsv:{lineno}: expected 2 tab-separated fields")
        templates.append((parts[0].strip(), parts[1].strip()))
    return templates

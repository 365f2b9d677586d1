"""Keyword search over the local corpus and Hindi answer rendering."""

from bolkhoj.resources import default_data_dir, load_default_resources
from bolkhoj.search import (build_query, drop_stop_words, filter_answer,
                            index_corpus, load_documents, load_templates,
                            number_hyperlinks, search)
from bolkhoj.transfer import AnswerRenderer, translate_hi_to_en

bundle = load_default_resources()
docs = load_documents(default_data_dir() / "docs.jsonl")
docs_by_id = {d.id: d for d in docs}
index = index_corpus(docs)
renderer = AnswerRenderer(bundle, load_templates(default_data_dir() / "templates.tsv"))

for hindi in ["sone ka bhav kya hain",
              "who ka kya matlab hai",
              "bharat ki rajdhani kya hai"]:
    english = translate_hi_to_en(hindi, bundle)
    keywords = drop_stop_words(english, bundle.stopwords)
    query = build_query(keywords, english)
    hits = search(index, query, docs_by_id, k=3)
    answer = filter_answer(hits, docs_by_id, query, renderer)
    print(hindi)
    print("  keywords:", " ".join(keywords))
    for i, hit in enumerate(hits, 1):
        print(f"  {i}. {hit.title}  ({hit.score:.3f})")
    print("  en:", answer.english_sentence)
    print("  hi:", answer.hindi_rendering)
    for link in number_hyperlinks(docs_by_id[hits[0].doc_id]):
        print(f"  [{link.number}] {link.text}")
    print()

"""Inverted index tests, including the brute-force ranking oracle."""

import math

import pytest

from geomove.ingest import InvertedIndex, extract_main_content, tag_places, Gazetteer, GazetteerEntry
from geomove.ingest.index import index_tokens

from helpers import make_document

DOC_TEXTS = [
    "Birds migrate south in autumn and birds return north in spring",
    "The migration of monarch butterflies spans thousands of miles",
    "Shipping lanes cross the Atlantic carrying goods to ports",
    "Bird watchers recorded flying geese over the wetlands",
    "Annual migrations of wildebeest cross the Serengeti plains",
    "The salmon run brings fish upstream to spawning grounds",
    "Trade caravans once moved silk and spices westward",
    "Migration patterns shift as the climate warms each decade",
    "Flying squirrels glide between trees rather than fly south",
    "Cargo ships and bulk carriers queue outside the harbor",
]


def brute_force_scores(doc_tokens: dict[str, list[str]], query: list[str]) -> dict[str, float]:
    """Independent tf-idf scorer: tf * (ln((1+n)/(1+df)) + 1) summed over terms."""
    n = len(doc_tokens)
    scores = {}
    for term in query:
        df = sum(1 for tokens in doc_tokens.values() if term in tokens)
        idf = math.log((1 + n) / (1 + df)) + 1.0
        for doc_id, tokens in doc_tokens.items():
            tf = tokens.count(term)
            if tf:
                scores[doc_id] = scores.get(doc_id, 0.0) + tf * idf
    return scores


@pytest.fixture()
def indexed():
    gaz = Gazetteer([GazetteerEntry("g1", "Atlantic"), GazetteerEntry("g2", "Serengeti")])
    index = InvertedIndex()
    docs = {}
    for i, text in enumerate(DOC_TEXTS):
        doc = tag_places(extract_main_content(make_document(text=text, doc_id=f"d{i}")), gaz)
        index.add(doc)
        docs[doc.doc_id] = index_tokens(doc.extracted_text)
    return index, docs


def test_empty_query(indexed):
    index, _ = indexed
    assert index.search([]) == []


def test_single_doc_single_term():
    gaz = Gazetteer([GazetteerEntry("g1", "Atlantic")])
    index = InvertedIndex()
    doc = tag_places(extract_main_content(make_document(text="birds fly south")), gaz)
    index.add(doc)
    results = index.search(["birds"])
    assert [doc_id for doc_id, _ in results] == [doc.doc_id]


def test_untagged_document_rejected():
    index = InvertedIndex()
    with pytest.raises(ValueError):
        index.add(extract_main_content(make_document(text="not tagged yet")))


def test_ranking_matches_brute_force(indexed):
    index, docs = indexed
    for query in (["birds", "migration"], ["flying"], ["cross", "the"], ["migrate", "south"]):
        expected = brute_force_scores(docs, query)
        got = index.search(query)
        assert {d: s for d, s in got} == pytest.approx(expected)
        # ranking: descending score, doc_id tie-break
        resorted = sorted(expected.items(), key=lambda kv: (-kv[1], kv[0]))
        assert [d for d, _ in got] == [d for d, _ in resorted]


def test_require_all(indexed):
    index, docs = indexed
    results = index.search(["birds", "migrate"], require_all=True)
    assert results  # d0 has both
    for doc_id, _ in results:
        assert "birds" in docs[doc_id] and "migrate" in docs[doc_id]
    # subset of the indexed docs
    assert {d for d, _ in results} <= set(docs)


def test_results_subset_of_indexed(indexed):
    index, docs = indexed
    for doc_id, _ in index.search(["the", "south", "harbor"]):
        assert doc_id in docs


def test_case_folded_queries(indexed):
    index, _ = indexed
    assert index.search(["Birds"]) == index.search(["birds"])

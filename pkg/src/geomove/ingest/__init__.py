"""Document ingestion: load, extract, segment, tag places, filter, index."""

from dataclasses import replace as _dc_replace

from geomove.corpus.types import Document, IngestStatus
from geomove.ingest.fetch import doc_id_from_bytes, load_document
from geomove.ingest.gazetteer import Gazetteer, GazetteerEntry, filter_multi_place, tag_places
from geomove.ingest.html import extract_main_content, extract_text_from_html
from geomove.ingest.index import InvertedIndex, index_tokens
from geomove.ingest.segment import load_abbreviations, segment_sentences

__all__ = [
    "Gazetteer",
    "GazetteerEntry",
    "InvertedIndex",
    "doc_id_from_bytes",
    "extract_main_content",
    "extract_text_from_html",
    "filter_multi_place",
    "index_tokens",
    "ingest_document",
    "load_abbreviations",
    "load_document",
    "segment_sentences",
    "tag_places",
]


def ingest_document(
    source,
    media: str,
    gazetteer: Gazetteer,
    abbreviations=(),
) -> Document:
    """Run one document through load -> extract -> segment -> tag.

    The multi-place filter is a separate batch step
    (:func:`filter_multi_place`) because it partitions collections.
    """
    doc = load_document(source, media)
    doc = extract_main_content(doc)
    sentences = segment_sentences(doc.extracted_text, abbreviations)
    doc = _dc_replace(doc, sentences=tuple(sentences))
    return tag_places(doc, gazetteer)

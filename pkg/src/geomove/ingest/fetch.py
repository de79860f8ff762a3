"""Document loading: local files or URLs, plain text or HTML.

Bulk crawling is out of scope; callers hand in individual sources or
URL-list files.  Document ids are content hashes, so loading the same
bytes twice dedups to the same id.
"""

from __future__ import annotations

import hashlib
import urllib.error
import urllib.request
from pathlib import Path

from geomove.corpus.types import Document, IngestStatus
from geomove.errors import (
    MalformedEncodingError,
    SourceUnreachableError,
    UnsupportedMediaError,
)

SUPPORTED_MEDIA = ("plain", "html")


def doc_id_from_bytes(data: bytes) -> str:
    return "doc_" + hashlib.sha256(data).hexdigest()[:16]


def _read_source(source: str | Path) -> bytes:
    text = str(source)
    if text.startswith("http://") or text.startswith("https://"):
        try:
            with urllib.request.urlopen(text, timeout=30) as resp:
                return resp.read()
        except (urllib.error.URLError, OSError) as exc:
            raise SourceUnreachableError(f"cannot fetch {text}: {exc}") from exc
    path = Path(text)
    try:
        return path.read_bytes()
    except OSError as exc:
        raise SourceUnreachableError(f"cannot read {path}: {exc}") from exc


def load_document(source: str | Path, media: str = "plain") -> Document:
    """Fetch one source into a Document in state Fetched.

    ``raw_content`` is stored verbatim (UTF-8 decoded); the doc id is a
    hash of the raw bytes.  Raises UnsupportedMediaError for unknown
    media kinds, SourceUnreachableError when the source cannot be read,
    and MalformedEncodingError (with the byte offset) on invalid UTF-8.
    """
    if media not in SUPPORTED_MEDIA:
        raise UnsupportedMediaError(f"media must be one of {SUPPORTED_MEDIA}, got {media!r}")
    data = _read_source(source)
    try:
        raw = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedEncodingError(f"{source} is not valid UTF-8", exc.start) from exc
    return Document(
        doc_id=doc_id_from_bytes(data),
        source_uri=str(source),
        raw_content=raw,
        media=media,
        ingest_status=IngestStatus.FETCHED,
    )

"""Main-content extraction from HTML.

The heuristic is deliberately simple and deterministic: drop boilerplate
tags outright (script/style/nav/header/footer/...), then score every
block-level candidate subtree by

    text_chars * (1 - link_density) / (1 + candidate_descendants)

and keep the visible text of the best-scoring subtree.  Dividing by the
candidate-descendant count is what makes a tight article beat the whole
body (which also contains sidebars); link density demotes link farms.
Ties go to document order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace as dc_replace
from html.parser import HTMLParser
from typing import Optional, Union

from geomove.corpus.types import Document, IngestStatus
from geomove.errors import EmptyExtractionError

DROP_TAGS = {
    "script",
    "style",
    "noscript",
    "template",
    "nav",
    "header",
    "footer",
    "aside",
    "form",
    "iframe",
    "svg",
    "button",
    "select",
    "option",
    "head",
    "title",
    "meta",
    "link",
}

BLOCK_TAGS = {
    "address",
    "article",
    "blockquote",
    "body",
    "div",
    "dd",
    "dl",
    "dt",
    "figcaption",
    "figure",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "hr",
    "html",
    "li",
    "main",
    "ol",
    "p",
    "pre",
    "section",
    "table",
    "tbody",
    "td",
    "th",
    "thead",
    "tr",
    "ul",
}

CANDIDATE_TAGS = {"article", "body", "div", "li", "main", "section", "table", "td"}

VOID_TAGS = {"br", "hr", "img", "input", "area", "base", "col", "embed", "source", "track", "wbr"}


@dataclass
class _Element:
    tag: str
    children: list[Union["_Element", str]] = field(default_factory=list)


class _TreeBuilder(HTMLParser):
    """Builds a light element tree, dropping boilerplate subtrees as it goes."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = _Element("#root")
        self._stack: list[_Element] = [self.root]
        self._drop_depth = 0

    def handle_starttag(self, tag, attrs):
        if self._drop_depth > 0:
            if tag not in VOID_TAGS:
                self._drop_depth += 1
            return
        if tag in DROP_TAGS:
            if tag not in VOID_TAGS:
                self._drop_depth = 1
            return
        el = _Element(tag)
        self._stack[-1].children.append(el)
        if tag not in VOID_TAGS:
            self._stack.append(el)

    def handle_endtag(self, tag):
        if tag in VOID_TAGS:
            return
        if self._drop_depth > 0:
            self._drop_depth -= 1
            return
        # pop back to the matching open tag, tolerating unbalanced HTML
        for i in range(len(self._stack) - 1, 0, -1):
            if self._stack[i].tag == tag:
                del self._stack[i:]
                break

    def handle_data(self, data):
        if self._drop_depth == 0 and data:
            self._stack[-1].children.append(data)


_WS = re.compile(r"\s+")


def _render(el: _Element) -> list[str]:
    """Visible text of a subtree as a list of paragraphs."""
    paragraphs: list[str] = []
    buf: list[str] = []

    def flush():
        text = _WS.sub(" ", "".join(buf)).strip()
        if text:
            paragraphs.append(text)
        buf.clear()

    for child in el.children:
        if isinstance(child, str):
            buf.append(child)
        elif child.tag in BLOCK_TAGS:
            flush()
            paragraphs.extend(_render(child))
        elif child.tag == "br":
            flush()
        else:
            # inline element: splice its text into the current paragraph
            inner = _render(child)
            buf.append(" ".join(inner))
    flush()
    return paragraphs


def _text_len(el: _Element) -> int:
    total = 0
    for child in el.children:
        if isinstance(child, str):
            total += len(_WS.sub(" ", child).strip())
        else:
            total += _text_len(child)
    return total


def _anchor_text_len(el: _Element, inside_anchor: bool = False) -> int:
    total = 0
    for child in el.children:
        if isinstance(child, str):
            if inside_anchor:
                total += len(_WS.sub(" ", child).strip())
        else:
            total += _anchor_text_len(child, inside_anchor or child.tag == "a")
    return total


def _candidates(el: _Element) -> list[_Element]:
    found = []
    for child in el.children:
        if isinstance(child, str):
            continue
        if child.tag in CANDIDATE_TAGS:
            found.append(child)
        found.extend(_candidates(child))
    return found


def extract_text_from_html(html: str) -> str:
    """Return the visible text of the highest-density content block."""
    builder = _TreeBuilder()
    builder.feed(html)
    builder.close()

    candidates = _candidates(builder.root) or [builder.root]
    best: Optional[tuple[float, int, _Element]] = None
    for order, el in enumerate(candidates):
        chars = _text_len(el)
        if chars == 0:
            continue
        link_chars = _anchor_text_len(el)
        link_density = link_chars / chars
        descendants = len(_candidates(el))
        score = chars * (1.0 - link_density) / (1.0 + descendants)
        if best is None or score > best[0]:
            best = (score, order, el)
    if best is None:
        raise EmptyExtractionError("empty-after-extraction: no visible text in any block")
    return "\n".join(_render(best[2]))


def extract_main_content(doc: Document) -> Document:
    """Move a Fetched document to Extracted.

    Plain-text documents pass through with ``extracted_text`` equal to
    ``raw_content``; HTML goes through the density heuristic.  Raises
    EmptyExtractionError when nothing visible remains.
    """
    if doc.media == "plain":
        text = doc.raw_content
        if not text.strip():
            raise EmptyExtractionError("empty-after-extraction: document has no text")
    else:
        text = extract_text_from_html(doc.raw_content)
    return dc_replace(doc, extracted_text=text, ingest_status=IngestStatus.EXTRACTED)

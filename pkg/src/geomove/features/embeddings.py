"""Precomputed sentence/token embedding provider.

Embeddings are consumed, never computed: a sidecar file of precomputed
sentence vectors (keyed by statement id) is the primary source, with a
token-averaging fallback over a token-vector file.  The fallback
averages the vectors of the first 100 tokens only, mirroring the
sentence-level computation bound the corpus was built with.

File formats (UTF-8):
    token file:     "D <dim>" header, then "token v1 v2 ... vD" per line
    sentence file:  "D <dim>" header, then "statement_id v1 ... vD"
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from geomove.errors import DimensionMismatchError

logger = logging.getLogger(__name__)

MAX_TOKENS = 100


def _load_vector_file(path: str | Path) -> tuple[int, dict[str, np.ndarray]]:
    vectors: dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2 or header[0] != "D":
            raise DimensionMismatchError(f"{path}: expected header 'D <dim>'")
        dim = int(header[1])
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(" ")
            key = parts[0]
            values = parts[1:]
            if len(values) != dim:
                raise DimensionMismatchError(
                    f"{path}:{lineno}: {key!r} has {len(values)} values, expected {dim}"
                )
            vectors[key] = np.array([float(v) for v in values], dtype=np.float64)
    return dim, vectors


class EmbeddingProvider:
    """Immutable after load; embed() is pure and thread-safe."""

    def __init__(
        self,
        dim: int,
        sentence_vectors: Optional[dict[str, np.ndarray]] = None,
        token_vectors: Optional[dict[str, np.ndarray]] = None,
    ):
        self.dim = dim
        self._sentences = sentence_vectors or {}
        self._tokens = token_vectors or {}

    @classmethod
    def from_files(
        cls,
        sentence_file: Optional[str | Path] = None,
        token_file: Optional[str | Path] = None,
    ) -> "EmbeddingProvider":
        if sentence_file is None and token_file is None:
            raise ValueError("need a sentence-vector file, a token-vector file, or both")
        sent_dim = tok_dim = None
        sentences = tokens = None
        if sentence_file is not None:
            sent_dim, sentences = _load_vector_file(sentence_file)
        if token_file is not None:
            tok_dim, tokens = _load_vector_file(token_file)
        if sent_dim is not None and tok_dim is not None and sent_dim != tok_dim:
            raise DimensionMismatchError(
                f"sentence file dim {sent_dim} != token file dim {tok_dim}"
            )
        return cls(dim=sent_dim if sent_dim is not None else tok_dim,
                   sentence_vectors=sentences, token_vectors=tokens)

    def embed(self, statement_id: Optional[str], tokens: Sequence[str]) -> np.ndarray:
        """Sentence vector by id, else token-average fallback, else zeros.

        The fallback averages the known token vectors among the first
        ``MAX_TOKENS`` tokens; with no coverage at all a zero vector is
        returned and a warning logged.
        """
        if statement_id is not None:
            stored = self._sentences.get(statement_id)
            if stored is not None:
                return stored.copy()
        if self._tokens:
            covered = [self._tokens[t] for t in tokens[:MAX_TOKENS] if t in self._tokens]
            if covered:
                return np.mean(covered, axis=0)
        logger.warning(
            "no embedding coverage for statement %r (%d tokens); returning zeros",
            statement_id,
            len(tokens),
        )
        return np.zeros(self.dim, dtype=np.float64)


def write_vector_file(path: str | Path, dim: int, rows: dict[str, np.ndarray]) -> None:
    """Helper for producing sidecar files (tests, demos, external tools)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"D {dim}\n")
        for key, vec in rows.items():
            if len(vec) != dim:
                raise DimensionMismatchError(f"{key!r} has dim {len(vec)}, expected {dim}")
            fh.write(key + " " + " ".join(repr(float(v)) for v in vec) + "\n")

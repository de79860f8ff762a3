"""Named feature specs: the uniform featurizer interface the sweep uses.

A spec id names a recipe ("tfidf_word_ngram", "embedding", "dense", ...).
Fitting a spec on training rows yields a Featurizer that turns one row
into a dense vector; models and committee members carry the featurizer's
spec id so the pool is guaranteed to be featurized the same way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from geomove.errors import FeatureSpecMismatchError
from geomove.features.embeddings import EmbeddingProvider
from geomove.features.vocab import (
    FeatureMode,
    Vocabulary,
    fit_vocabulary,
    transform_count,
    transform_tfidf,
)

SPARSE_SPEC_IDS = ("count", "tfidf_word", "tfidf_word_ngram", "tfidf_char_ngram")


@dataclass(frozen=True)
class ExampleRow:
    """One pipeline item: a statement (or pool sentence) ready for models.

    ``tokens`` feeds text featurizers; ``vector`` is for pre-featurized
    rows (simulation, external features).  ``label`` is 1/0/None and
    ``truth`` carries simulation ground truth for oracle reviewers.
    Rows cut from real documents carry (doc_id, span, text) so reviewed
    candidates can be materialized back into corpus statements.
    """

    statement_id: str
    tokens: Optional[tuple[str, ...]] = None
    vector: Optional[np.ndarray] = None
    label: Optional[int] = None
    truth: Optional[int] = None
    doc_id: Optional[str] = None
    span: Optional[tuple[int, int]] = None
    text: Optional[str] = None

    def with_label(self, label: int) -> "ExampleRow":
        from dataclasses import replace

        return replace(self, label=label)


class Featurizer:
    spec_id: str
    dim: int

    def transform(self, row: ExampleRow) -> np.ndarray:
        raise NotImplementedError

    def matrix(self, rows: Sequence[ExampleRow]) -> np.ndarray:
        return np.vstack([self.transform(r) for r in rows]) if rows else np.zeros((0, self.dim))


class SparseTextFeaturizer(Featurizer):
    def __init__(self, spec_id: str, vocab: Vocabulary, tfidf: bool):
        self.spec_id = spec_id
        self.vocab = vocab
        self.tfidf = tfidf
        self.dim = vocab.size

    def transform(self, row: ExampleRow) -> np.ndarray:
        if row.tokens is None:
            raise FeatureSpecMismatchError(
                f"row {row.statement_id} has no tokens for spec {self.spec_id!r}"
            )
        fn = transform_tfidf if self.tfidf else transform_count
        return fn(self.vocab, row.tokens).to_dense()


class EmbeddingFeaturizer(Featurizer):
    spec_id = "embedding"

    def __init__(self, provider: EmbeddingProvider):
        self.provider = provider
        self.dim = provider.dim

    def transform(self, row: ExampleRow) -> np.ndarray:
        if row.tokens is None:
            raise FeatureSpecMismatchError(
                f"row {row.statement_id} has no tokens for spec 'embedding'"
            )
        return self.provider.embed(row.statement_id, list(row.tokens))


class DenseFeaturizer(Featurizer):
    """Identity over rows that already carry a vector (simulation path)."""

    def __init__(self, dim: int):
        self.dim = dim
        self.spec_id = f"dense:{dim}"

    def transform(self, row: ExampleRow) -> np.ndarray:
        if row.vector is None:
            raise FeatureSpecMismatchError(f"row {row.statement_id} carries no dense vector")
        if len(row.vector) != self.dim:
            raise FeatureSpecMismatchError(
                f"row {row.statement_id} has dim {len(row.vector)}, spec wants {self.dim}"
            )
        return np.asarray(row.vector, dtype=np.float64)


def fit_featurizer(
    spec_id: str,
    train_rows: Sequence[ExampleRow],
    min_df: int = 1,
    word_ngram_range: tuple[int, int] = (1, 3),
    char_ngram_range: tuple[int, int] = (2, 4),
    embedding_provider: Optional[EmbeddingProvider] = None,
) -> Featurizer:
    """Fit (or instantiate) the featurizer named by ``spec_id`` on train rows."""
    if spec_id.startswith("dense"):
        dims = {len(r.vector) for r in train_rows if r.vector is not None}
        if len(dims) != 1:
            raise FeatureSpecMismatchError(f"dense rows have inconsistent dims {dims}")
        return DenseFeaturizer(dims.pop())
    if spec_id == "embedding":
        if embedding_provider is None:
            raise FeatureSpecMismatchError("spec 'embedding' needs an EmbeddingProvider")
        return EmbeddingFeaturizer(embedding_provider)
    token_lists = [r.tokens for r in train_rows]
    if any(t is None for t in token_lists):
        raise FeatureSpecMismatchError(f"spec {spec_id!r} needs token rows")
    if spec_id == "count":
        vocab = fit_vocabulary(token_lists, FeatureMode.WORD, min_df=min_df)
        return SparseTextFeaturizer(spec_id, vocab, tfidf=False)
    if spec_id == "tfidf_word":
        vocab = fit_vocabulary(token_lists, FeatureMode.WORD, min_df=min_df)
        return SparseTextFeaturizer(spec_id, vocab, tfidf=True)
    if spec_id == "tfidf_word_ngram":
        vocab = fit_vocabulary(
            token_lists, FeatureMode.WORD_NGRAM, min_df=min_df, ngram_range=word_ngram_range
        )
        return SparseTextFeaturizer(spec_id, vocab, tfidf=True)
    if spec_id == "tfidf_char_ngram":
        vocab = fit_vocabulary(
            token_lists, FeatureMode.CHAR_NGRAM, min_df=min_df, ngram_range=char_ngram_range
        )
        return SparseTextFeaturizer(spec_id, vocab, tfidf=True)
    raise FeatureSpecMismatchError(f"unknown feature spec {spec_id!r}")

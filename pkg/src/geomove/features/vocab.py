"""Sparse featurizers: count vectors and tf-idf over words, word n-grams,
and within-token character n-grams.

The idf is the smoothed variant ln((1 + n) / (1 + df)) + 1, which never
divides by zero, and tf-idf vectors are L2-normalized (so they are unit
length or, when no feature is known, all-zero).  Character n-grams are
taken inside "<token>"-padded forms; cleaned text can never contain the
angle-bracket pad characters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from geomove.errors import EmptyVocabularyError

PAD_LEFT = "<"
PAD_RIGHT = ">"


class FeatureMode(Enum):
    WORD = "word"
    WORD_NGRAM = "word_ngram"
    CHAR_NGRAM = "char_ngram"


def char_ngrams_of_token(token: str, n_lo: int = 2, n_hi: int = 4) -> list[str]:
    """All n-grams, n in [n_lo, n_hi], of the padded token "<t>"."""
    padded = PAD_LEFT + token + PAD_RIGHT
    grams = []
    for n in range(n_lo, n_hi + 1):
        for i in range(len(padded) - n + 1):
            grams.append(padded[i : i + n])
    return grams


def features_of(
    tokens: Sequence[str],
    mode: FeatureMode,
    ngram_range: tuple[int, int],
) -> list[str]:
    """The feature multiset of one token list under a mode."""
    if mode is FeatureMode.WORD:
        return list(tokens)
    if mode is FeatureMode.WORD_NGRAM:
        lo, hi = ngram_range
        feats = []
        for n in range(lo, hi + 1):
            for i in range(len(tokens) - n + 1):
                feats.append(" ".join(tokens[i : i + n]))
        return feats
    if mode is FeatureMode.CHAR_NGRAM:
        lo, hi = ngram_range
        feats = []
        for token in tokens:
            feats.extend(char_ngrams_of_token(token, lo, hi))
        return feats
    raise ValueError(f"unknown feature mode {mode}")


@dataclass(frozen=True)
class Vocabulary:
    """Feature -> dense column index, with document frequencies."""

    mode: FeatureMode
    ngram_range: tuple[int, int]
    index: dict[str, int]
    df: np.ndarray  # df[i] for feature with index i
    n_docs: int

    @property
    def size(self) -> int:
        return len(self.index)

    def idf(self) -> np.ndarray:
        return np.log((1.0 + self.n_docs) / (1.0 + self.df)) + 1.0


DEFAULT_RANGES = {
    FeatureMode.WORD: (1, 1),
    FeatureMode.WORD_NGRAM: (1, 3),
    FeatureMode.CHAR_NGRAM: (2, 4),
}


def fit_vocabulary(
    corpus: Iterable[Sequence[str]],
    mode: FeatureMode = FeatureMode.WORD,
    min_df: int = 1,
    ngram_range: tuple[int, int] | None = None,
) -> Vocabulary:
    """Build a vocabulary over a corpus of token lists.

    Features seen in fewer than ``min_df`` documents are dropped; column
    indices are assigned in sorted feature order so fits are
    deterministic.  Raises EmptyVocabularyError when nothing survives.
    """
    ngram_range = ngram_range or DEFAULT_RANGES[mode]
    df_counts: dict[str, int] = {}
    n_docs = 0
    for tokens in corpus:
        n_docs += 1
        for feat in set(features_of(tokens, mode, ngram_range)):
            df_counts[feat] = df_counts.get(feat, 0) + 1
    if n_docs == 0:
        raise EmptyVocabularyError("empty corpus")
    kept = sorted(f for f, c in df_counts.items() if c >= min_df)
    if not kept:
        raise EmptyVocabularyError(f"no feature reached min_df={min_df}")
    index = {f: i for i, f in enumerate(kept)}
    df = np.array([df_counts[f] for f in kept], dtype=np.float64)
    return Vocabulary(mode=mode, ngram_range=ngram_range, index=index, df=df, n_docs=n_docs)


@dataclass(frozen=True)
class FeatureVector:
    """Sparse vector with strictly increasing indices."""

    indices: np.ndarray
    weights: np.ndarray
    dim: int

    def __post_init__(self):
        if len(self.indices) != len(self.weights):
            raise ValueError("indices and weights must align")
        if len(self.indices) > 1 and not np.all(np.diff(self.indices) > 0):
            raise ValueError("sparse indices must be strictly increasing")

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim, dtype=np.float64)
        dense[self.indices] = self.weights
        return dense

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(self.weights**2)))


def _term_counts(vocab: Vocabulary, tokens: Sequence[str]) -> dict[int, float]:
    counts: dict[int, float] = {}
    for feat in features_of(tokens, vocab.mode, vocab.ngram_range):
        col = vocab.index.get(feat)
        if col is not None:
            counts[col] = counts.get(col, 0.0) + 1.0
    return counts


def transform_count(vocab: Vocabulary, tokens: Sequence[str]) -> FeatureVector:
    """Raw term-frequency vector; unknown features contribute nothing."""
    counts = _term_counts(vocab, tokens)
    cols = np.array(sorted(counts), dtype=np.int64)
    vals = np.array([counts[c] for c in cols], dtype=np.float64)
    return FeatureVector(indices=cols, weights=vals, dim=vocab.size)


def transform_tfidf(vocab: Vocabulary, tokens: Sequence[str]) -> FeatureVector:
    """tf * idf, L2-normalized.

    weight(f) = tf(f) * (ln((1 + n) / (1 + df(f))) + 1), then the whole
    vector is scaled to unit norm.  Scale-invariant in tf: doubling every
    count leaves the normalized vector unchanged.
    """
    counts = _term_counts(vocab, tokens)
    cols = np.array(sorted(counts), dtype=np.int64)
    vals = np.array([counts[c] for c in cols], dtype=np.float64)
    if len(cols):
        idf = np.log((1.0 + vocab.n_docs) / (1.0 + vocab.df[cols])) + 1.0
        vals = vals * idf
        norm = np.sqrt(np.sum(vals**2))
        if norm > 0:
            vals = vals / norm
    return FeatureVector(indices=cols, weights=vals, dim=vocab.size)

"""Text cleaning, sparse featurizers, and precomputed-embedding provider."""

from geomove.features.cleaning import clean_text, expand_contractions, load_contractions, tokenize
from geomove.features.embeddings import MAX_TOKENS, EmbeddingProvider, write_vector_file
from geomove.features.specs import (
    SPARSE_SPEC_IDS,
    DenseFeaturizer,
    EmbeddingFeaturizer,
    ExampleRow,
    Featurizer,
    SparseTextFeaturizer,
    fit_featurizer,
)
from geomove.features.vocab import (
    FeatureMode,
    FeatureVector,
    Vocabulary,
    char_ngrams_of_token,
    features_of,
    fit_vocabulary,
    transform_count,
    transform_tfidf,
)

__all__ = [
    "MAX_TOKENS",
    "SPARSE_SPEC_IDS",
    "DenseFeaturizer",
    "EmbeddingFeaturizer",
    "EmbeddingProvider",
    "ExampleRow",
    "FeatureMode",
    "FeatureVector",
    "Featurizer",
    "SparseTextFeaturizer",
    "Vocabulary",
    "char_ngrams_of_token",
    "clean_text",
    "expand_contractions",
    "features_of",
    "fit_featurizer",
    "fit_vocabulary",
    "load_contractions",
    "tokenize",
    "transform_count",
    "transform_tfidf",
    "write_vector_file",
]

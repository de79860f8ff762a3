"""geomove: build corpora of geographic-movement statements.

The pipeline: gazetteer-filtered ingestion, human span labeling with
crowd voting, a committee of classifiers, and an iterative
expand-review loop that grows a gold-standard corpus and exports a
silver-standard one with error-likelihood metadata.
"""

__version__ = "0.1.0"

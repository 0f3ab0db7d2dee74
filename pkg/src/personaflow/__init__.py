"""Microblog personality-class analytics toolkit.

Ingests labeled microblog corpora, extracts readability/lexical-category/
tf-idf-entity/word-vector features, trains tree-ensemble classifiers, runs
the 9-configuration ablation grid, and emits analysis reports.
"""

__version__ = "0.1.0"

"""Exact congestion analysis on Kautz digraphs and the word machinery behind it."""

__version__ = "0.1.0"

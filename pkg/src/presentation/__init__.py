"""Presentation language: parsing, rewriting, compilation and emission."""

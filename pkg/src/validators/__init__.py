"""Axiom validators package."""

"""Command workflow package."""

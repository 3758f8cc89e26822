"""Hopf vacuum integrals source package."""

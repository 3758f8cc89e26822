"""Exact Hopf algebra core: scalars, tensors, duality, smash products and integrals."""

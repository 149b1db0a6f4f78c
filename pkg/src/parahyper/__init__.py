"""Exact para-hypercomplex structures on four-dimensional real Lie algebras."""

"""Variance-based uncertainty bounds for unitary operators."""

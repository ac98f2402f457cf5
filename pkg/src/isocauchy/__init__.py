"""Isotropic Gaussian vs isotropic Cauchy likelihood-ratio testing."""

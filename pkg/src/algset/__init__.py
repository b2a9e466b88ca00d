"""Estimation of algebraic sets from noisy point samples."""

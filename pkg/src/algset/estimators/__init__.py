"""Set estimators built from fitted polynomials."""

"""soficlab: entropy of algebraic subshifts via periodic points, finite-field
Betti numbers of quotient complexes, and Yuzvinsky-defect experiments."""

__version__ = "0.1.0"

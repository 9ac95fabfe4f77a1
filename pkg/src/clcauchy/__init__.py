"""Cauchy problems for 2x2 hyperbolic systems via conservation-law pairs."""

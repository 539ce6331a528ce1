"""Exact symbolic engine for G(3) supergeometry: Grassmann polynomials, superdistributions,
graded Lie superalgebras, Spencer cohomology, jet-superspace contact calculus and models."""

__version__ = "0.1.0"

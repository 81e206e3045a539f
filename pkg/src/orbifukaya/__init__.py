"""Exact computations in topological Fukaya categories of graded surfaces
with an order-two symmetry."""

__version__ = "0.1.0"

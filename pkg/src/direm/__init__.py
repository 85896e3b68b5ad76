"""Embedding of directed graphs: manifold coordinates, sampling density and
vector field from asymmetric affinities."""

__version__ = "0.1.0"

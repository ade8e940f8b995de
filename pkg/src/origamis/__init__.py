"""Exact-arithmetic computations on general origamis (square-tiled
half-translation surfaces): construction and normalization, Veech groups as
generator-action stabilizers, compatible moduli lists, and Veech groups of
unbranched coverings."""

__version__ = "0.1.0"

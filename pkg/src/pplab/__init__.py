"""Exact computations with pushout products, symmetric pushout powers and
group quotients in finite sets, simplicial sets and chain complexes."""

__version__ = "0.1.0"

"""Exact-arithmetic engine for operadic Hochschild and cyclic cohomology
of finite-dimensional algebras, coalgebras and Hopf algebras."""

from opcohom.linalg import Field, Mat, Vec

__version__ = "0.1.0"

__all__ = ["Field", "Mat", "Vec", "__version__"]

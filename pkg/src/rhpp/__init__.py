"""Exact arithmetic for quotient-singularity configurations on b2 = 1 surfaces.

Submodules: ``hjcf`` (continued fractions), ``singularity``, ``lattice``,
``padic`` (local invariants), ``obstruction`` and ``census``.
"""
from ._kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]

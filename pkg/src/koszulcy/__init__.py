"""Exact engine for Koszul duality, cyclic homology, necklace Lie bialgebras
and their quantization."""

from .scalar import Scalar, koszul_sign, reduce_mod_params

__version__ = "0.1.0"

__all__ = ["Scalar", "koszul_sign", "reduce_mod_params", "__version__"]

"""Construction and verification tools for magic-state teleportation through
lattice surgery between a 3D color code and a surface code."""

from .gf2 import BitMatrix, BitVector
from .kernels import BACKEND
from .pauli import PauliOperator

__version__ = "0.1.0"

__all__ = ["BACKEND", "BitMatrix", "BitVector", "PauliOperator", "__version__"]

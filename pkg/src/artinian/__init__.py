"""Finite Artinian local rings: presentations, invariants, first-order
sentences, Witt coefficient frames and polynomial descent."""

from ._kernels import BACKEND, NUMBA_AVAILABLE
from .fields import FieldTower, is_prime
from .localring import LocalRing, RingElement, build, hom_check, iter_homs, polynomial_ring_quotient

__version__ = "0.1.0"

__all__ = ["BACKEND", "NUMBA_AVAILABLE", "FieldTower", "is_prime", "LocalRing", "RingElement",
           "build", "hom_check", "iter_homs", "polynomial_ring_quotient", "__version__"]

"""
Exact symbolic engine for covariant metrics, Hermitian structures and
Chern / Levi-Civita connections on presented quantum homogeneous spaces.
"""

from .scalar import Scalar
from .preset import load_preset
from .verify import run_suite

__version__ = "0.1.0"

__all__ = ["Scalar", "load_preset", "run_suite", "__version__"]

"""Numerical lab for best polynomial approximation of |x|^(alpha + i beta) on [-1, 1]."""

__version__ = "0.1.0"

from .errors import BernlabError, DomainError, NumericalError  # noqa: E402
from .functions import FunctionSpec, eval_function  # noqa: E402
from .numerics import PNorm, QuadratureGrid  # noqa: E402

__all__ = [
    "BernlabError",
    "DomainError",
    "FunctionSpec",
    "NumericalError",
    "PNorm",
    "QuadratureGrid",
    "eval_function",
    "__version__",
]

"""Best polynomial approximation in L_p([-a, a]) for p in [1, inf]."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..errors import UnsupportedExponent
from ..functions import FunctionSpec
from ..numerics import PNorm
from .l1 import best_l1
from .l2 import project_l2
from .lawson import minimax_complex
from .lp import best_lp
from .problem import ApproxProblem, ApproxResult
from .remez import remez_linf

__all__ = [
    "ApproxProblem",
    "ApproxResult",
    "best_approximation",
    "best_error",
    "best_l1",
    "best_lp",
    "minimax_complex",
    "project_l2",
    "remez_linf",
]


def _is_real(problem: ApproxProblem) -> bool:
    flag = problem.real_target()
    if flag is not None:
        return flag
    t = np.linspace(-0.97, 0.93, 37)
    v = np.asarray(problem.pulled_back()(t))
    return not (np.iscomplexobj(v) and np.any(np.imag(v)))


def best_approximation(problem: ApproxProblem) -> ApproxResult:
    """Dispatch to the solver matching the problem's exponent."""
    p = problem.pnorm.p
    if p < 1.0:
        raise UnsupportedExponent("p < 1 unsupported")
    if math.isinf(p):
        return remez_linf(problem) if _is_real(problem) else minimax_complex(problem)
    if p == 2.0:
        return project_l2(problem)
    if p == 1.0:
        return best_l1(problem)
    return best_lp(problem)


def best_error(target, degree: int, p="inf", a: float = 1.0, **kw) -> float:
    """E_n(target, L_p([-a, a])) as a float."""
    prob = ApproxProblem(target, degree, PNorm.parse(p), (-a, a), **kw)
    return best_approximation(prob).error

"""Problem and result records, plus the affine pullback every solver shares.

Every solver works on the reference interval [-1, 1]. A problem on [lo, hi]
is pulled back through x = mid + half * t; the L_p error picks up the factor
half**(1/p). Even targets are solved on [0, 1] over the even Chebyshev
polynomials T_0, T_2, ..., with quadrature weights doubled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Tuple, Union

import numpy as np

from ..errors import DomainError, NonFinite
from ..functions import FunctionSpec
from ..numerics import DEFAULT_FLOOR, PNorm, QuadratureGrid
from ..polybase import CHEBYSHEV, Polynomial

Target = Union[FunctionSpec, Callable]


@dataclass(frozen=True)
class ApproxProblem:
    """E_n(target, L_p([lo, hi])).

    ``grid`` lives on [-1, 1], the pulled-back variable. ``symmetry_hint`` is
    "even", "none", or None to infer it from a FunctionSpec target.
    ``discrete`` forces (True) or forbids (False) the grid-only L_inf
    formulation; None picks it for targets without a limit at the origin.
    """

    target: Target
    degree: int
    pnorm: PNorm = PNorm(math.inf)
    interval: Tuple[float, float] = (-1.0, 1.0)
    grid: Optional[QuadratureGrid] = None
    symmetry_hint: Optional[str] = None
    discrete: Optional[bool] = None
    origin_floor: float = DEFAULT_FLOOR
    is_complex: Optional[bool] = None

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise DomainError(f"degree must be a nonnegative integer, got {self.degree}")
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "pnorm", PNorm.parse(self.pnorm))
        lo, hi = (float(v) for v in self.interval)
        if not hi > lo:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "interval", (lo, hi))
        if isinstance(self.target, FunctionSpec) and lo != -hi:
            raise DomainError("FunctionSpec targets are approximated on symmetric intervals [-a, a]")
        if self.symmetry_hint not in (None, "even", "none"):
            raise DomainError(f"symmetry_hint must be 'even' or 'none', got {self.symmetry_hint!r}")
        if self.grid is not None and self.grid.interval != (-1.0, 1.0):
            raise DomainError("solver grids live on the reference interval [-1, 1]")

    @property
    def even(self) -> bool:
        if self.symmetry_hint is not None:
            return self.symmetry_hint == "even"
        lo, hi = self.interval
        return isinstance(self.target, FunctionSpec) and self.target.is_even and lo == -hi

    @property
    def half(self) -> float:
        return 0.5 * (self.interval[1] - self.interval[0])

    @property
    def mid(self) -> float:
        return 0.5 * (self.interval[0] + self.interval[1])

    def origin_ok(self) -> bool:
        """Whether t = 0 (x = mid) may be used as a node."""
        if isinstance(self.target, FunctionSpec):
            return self.target.continuous_at_origin
        return True

    def use_discrete(self) -> bool:
        if self.discrete is not None:
            return self.discrete
        return not self.origin_ok()

    def real_target(self) -> bool:
        if self.is_complex is not None:
            return not self.is_complex
        if isinstance(self.target, FunctionSpec):
            return self.target.is_real
        return None  # decided from sampled values

    def resolved_grid(self) -> QuadratureGrid:
        if self.grid is not None:
            return self.grid
        return QuadratureGrid.graded(
            -1.0, 1.0, floor=self.origin_floor, resolution=self.degree,
            include_origin=self.origin_ok(),
        )

    def pulled_back(self) -> Callable[[np.ndarray], np.ndarray]:
        f, mid, half = self.target, self.mid, self.half
        if mid == 0.0 and half == 1.0:
            return f
        return lambda t: f(mid + half * np.asarray(t, dtype=float))


@dataclass
class ApproxResult:
    error: float
    polynomial: Polynomial
    p: PNorm
    degree: int
    interval: Tuple[float, float]
    converged: bool
    discretized: bool
    iterations: int
    method: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def discretization_note(self) -> str:
        if self.discretized:
            return "grid value: discrete minimum over the declared constraint grid"
        if self.p.is_inf:
            return "continuum value: peaks refined between sample points"
        return "quadrature value: residual norm by graded Gauss quadrature"

    def to_dict(self) -> dict:
        return {
            "p": self.p.label(),
            "n": self.degree,
            "interval": list(self.interval),
            "error": self.error,
            "converged": self.converged,
            "discretized": self.discretized,
            "method": self.method,
            "iterations": self.iterations,
            "note": self.discretization_note,
            "polynomial": self.polynomial.to_dict(),
            "diagnostics": _jsonable(self.diagnostics),
        }


def _jsonable(obj: Any):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


class Reduced:
    """The pulled-back, possibly symmetry-reduced problem on [-1, 1] or [0, 1]."""

    def __init__(self, problem: ApproxProblem):
        self.problem = problem
        self.n = problem.degree
        self.even = problem.even
        self.f = problem.pulled_back()
        self.cols = np.arange(0, self.n + 1, 2) if self.even else np.arange(self.n + 1)
        self.lo = 0.0 if self.even else -1.0
        self._grid = None

    @property
    def grid(self) -> QuadratureGrid:
        if self._grid is None:
            self._grid = self.problem.resolved_grid()
        return self._grid

    def basis(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.polynomial.chebyshev.chebvander(t, self.n)[..., self.cols]

    def values(self, t: np.ndarray) -> np.ndarray:
        v = np.asarray(self.f(t))
        if v.shape != np.shape(t):
            v = np.broadcast_to(v, np.shape(t)).copy()
        if not np.all(np.isfinite(v)):
            raise NonFinite("target is not finite on the grid")
        return v

    def quadrature(self):
        t, w = self.grid.quadrature()
        if self.even:
            keep = t > 0.0
            return t[keep], 2.0 * w[keep]
        return np.asarray(t), np.asarray(w)

    def sup_nodes(self) -> np.ndarray:
        t = self.grid.sup_nodes()
        if self.even:
            t = t[t >= 0.0]
        return np.asarray(t)

    def polynomial(self, c) -> Polynomial:
        full = np.zeros(self.n + 1, dtype=complex)
        full[self.cols] = c
        return Polynomial(tuple(full), CHEBYSHEV, self.problem.interval)

    def scale(self) -> float:
        """Factor converting reference-interval errors to the problem's interval."""
        return self.problem.half ** self.problem.pnorm.inv

    def to_x(self, t):
        return self.problem.mid + self.problem.half * np.asarray(t, dtype=float)

    def mirrored(self, t: np.ndarray, v: np.ndarray):
        """Extend even-reduced points/values to the full interval, sorted."""
        t = np.asarray(t, dtype=float)
        v = np.asarray(v)
        if not self.even:
            return t, v
        pos = t > 0.0
        tt = np.concatenate([-t[pos][::-1], t])
        vv = np.concatenate([v[pos][::-1], v])
        return tt, vv


def require_bounded(problem: ApproxProblem) -> None:
    """Uniform approximation only makes sense for bounded targets (alpha >= 0)."""
    tgt = problem.target
    if isinstance(tgt, FunctionSpec) and tgt.alpha < 0.0:
        raise DomainError(f"f is unbounded for alpha = {tgt.alpha} < 0; p = inf needs alpha >= 0")


def sign_changes(t: np.ndarray, r: np.ndarray, rel_zero: float = 1e-9):
    """Locations (midpoints) where the real residual changes sign, zeros skipped.

    "Zero" is relative to the median |r|: singular targets make the maximum
    astronomically large near the origin.
    """
    r = np.asarray(r, dtype=float)
    if r.size == 0:
        return []
    tiny = rel_zero * float(np.median(np.abs(r)))
    locs = []
    last_sign, last_t = 0, None
    for ti, ri in zip(t, r):
        if abs(ri) <= tiny:
            continue
        s = 1 if ri > 0 else -1
        if last_sign and s != last_sign:
            locs.append(0.5 * (last_t + ti))
        last_sign, last_t = s, ti
    return locs


def longest_alternation(signs) -> int:
    """Length of the longest alternating-sign subsequence."""
    count, last = 0, 0
    for s in signs:
        if s != 0 and s != last:
            count += 1
            last = s
    return count

"""Scalar machinery: graded quadrature and L_p norms, complex gamma, Brent roots."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, GridError, NoBracket, NonFinite, PoleError, UnsupportedExponent

DEFAULT_RATIO = 0.25
DEFAULT_FLOOR = 1e-14
DEFAULT_NODES = 40
# Innermost panel [0, d] is integrated after x = d * u**TAIL_POWER, which turns
# x**s (s > -1) into a smooth power of u.
TAIL_POWER = 40


@dataclass(frozen=True)
class PNorm:
    """Integrability exponent p in [1, inf] and the triangle exponent min(1, p)."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p <= 0.0:
            raise DomainError(f"p must be positive, got {self.p}")
        if p < 1.0:
            raise UnsupportedExponent("p < 1 unsupported")
        object.__setattr__(self, "p", p)

    @classmethod
    def parse(cls, text) -> "PNorm":
        if isinstance(text, PNorm):
            return text
        if isinstance(text, str) and text.strip().lower() in ("inf", "infinity", "oo"):
            return cls(math.inf)
        try:
            value = float(text)
        except (TypeError, ValueError):
            raise DomainError(f"cannot parse p from {text!r}") from None
        return cls(value)

    @property
    def p_tilde(self) -> float:
        return min(1.0, self.p)

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.p)

    @property
    def inv(self) -> float:
        """1/p, zero for p = inf."""
        return 0.0 if self.is_inf else 1.0 / self.p

    def label(self) -> str:
        return "inf" if self.is_inf else repr(self.p)


@lru_cache(maxsize=64)
def gauss_legendre(m: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _subdivide(a: float, b: float, lo: float, hi: float, pieces: int):
    """Split [a, b] into ``pieces`` panels equally spaced in the Chebyshev angle of [lo, hi]."""
    if pieces <= 1:
        return [(a, b)]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    ta = np.arccos(np.clip((a - mid) / half, -1.0, 1.0))
    tb = np.arccos(np.clip((b - mid) / half, -1.0, 1.0))
    thetas = np.linspace(ta, tb, pieces + 1)
    edges = [a] + [mid + half * math.cos(t) for t in thetas[1:-1]] + [b]
    return list(zip(edges[:-1], edges[1:]))


@dataclass(frozen=True)
class QuadratureGrid:
    """Panels tiling ``interval``, geometrically graded toward 0 when 0 is inside.

    Quadrature uses ``nodes_per_panel`` Gauss-Legendre points per panel. A panel
    with an endpoint at 0 is a tail panel and is integrated after a power
    substitution, so no quadrature node ever sits at 0. ``sup_nodes`` (the
    constraint grid for p = inf) contains the Gauss nodes of the non-tail
    panels and the panel edges; the origin is added only when
    ``include_origin`` is set.
    """

    interval: Tuple[float, float]
    panels: Tuple[Tuple[float, float], ...]
    nodes_per_panel: int = DEFAULT_NODES
    origin_floor: Optional[float] = None
    include_origin: bool = False
    ratio: float = DEFAULT_RATIO
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        lo, hi = (float(v) for v in self.interval)
        object.__setattr__(self, "interval", (lo, hi))
        object.__setattr__(self, "panels", tuple((float(a), float(b)) for a, b in self.panels))
        if self.nodes_per_panel < 1:
            raise GridError("nodes_per_panel must be positive")
        self.validate()

    def validate(self) -> None:
        lo, hi = self.interval
        if not self.panels or not hi > lo:
            raise GridError("empty grid")
        if self.panels[0][0] != lo or self.panels[-1][1] != hi:
            raise GridError(f"panels do not cover [{lo}, {hi}]")
        for (a, b), (c, _) in zip(self.panels[:-1], self.panels[1:]):
            if b != c:
                raise GridError(f"gap or overlap between panels at {b} / {c}")
        for a, b in self.panels:
            if not b > a:
                raise GridError(f"degenerate panel [{a}, {b}]")

    @classmethod
    def graded(
        cls,
        lo: float = -1.0,
        hi: float = 1.0,
        ratio: float = DEFAULT_RATIO,
        floor: float = DEFAULT_FLOOR,
        nodes_per_panel: int = DEFAULT_NODES,
        resolution: int = 0,
        density: float = 6.0,
        include_origin: bool = False,
    ) -> "QuadratureGrid":
        """Geometric grading toward 0 with ratio ``ratio`` down to ``floor``.

        ``resolution`` asks for enough panels to resolve a polynomial of that
        degree: panels are split in the Chebyshev angle until each holds about
        ``density`` nodes per half-oscillation. Refining ``floor`` only appends
        panels next to the origin; existing panels are unchanged.
        """
        lo, hi = float(lo), float(hi)
        if not hi > lo:
            raise GridError(f"bad interval [{lo}, {hi}]")
        if not 0.0 < ratio < 1.0:
            raise GridError("ratio must lie in (0, 1)")
        if not floor > 0.0:
            raise GridError("floor must be positive")

        def side(extent):
            edges = [extent]
            while edges[-1] > floor * extent:
                edges.append(extent * ratio ** len(edges))
            return edges

        raw = []
        smallest = None
        if lo < 0.0 < hi:
            neg = side(-lo)
            pos = side(hi)
            smallest = min(neg[-1], pos[-1])
            edges = [-e for e in neg] + [0.0] + pos[::-1]
            raw = list(zip(edges[:-1], edges[1:]))
        elif lo == 0.0:
            pos = side(hi)
            smallest = pos[-1]
            edges = [0.0] + pos[::-1]
            raw = list(zip(edges[:-1], edges[1:]))
        elif hi == 0.0:
            neg = side(-lo)
            smallest = neg[-1]
            edges = [-e for e in neg] + [0.0]
            raw = list(zip(edges[:-1], edges[1:]))
        else:
            raw = [(lo, hi)]

        panels = []
        for a, b in raw:
            if a == 0.0 or b == 0.0 or resolution <= 0:
                panels.append((a, b))
                continue
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            span = abs(
                math.acos(max(-1.0, min(1.0, (a - mid) / half)))
                - math.acos(max(-1.0, min(1.0, (b - mid) / half)))
            )
            pieces = math.ceil(density * span * (resolution + 1) / (math.pi * nodes_per_panel))
            panels.extend(_subdivide(a, b, lo, hi, pieces))
        return cls(
            interval=(lo, hi),
            panels=tuple(panels),
            nodes_per_panel=nodes_per_panel,
            origin_floor=smallest,
            include_origin=include_origin and smallest is not None,
            ratio=ratio,
        )

    @classmethod
    def plain(cls, lo: float, hi: float, panels: int = 1, nodes_per_panel: int = DEFAULT_NODES):
        edges = np.linspace(lo, hi, panels + 1)
        edges[0], edges[-1] = lo, hi
        return cls(interval=(lo, hi), panels=tuple(zip(edges[:-1], edges[1:])), nodes_per_panel=nodes_per_panel)

    def with_nodes(self, nodes_per_panel: int) -> "QuadratureGrid":
        return QuadratureGrid(
            self.interval, self.panels, nodes_per_panel, self.origin_floor, self.include_origin, self.ratio
        )

    def refined_toward_origin(self, levels: int = 4) -> "QuadratureGrid":
        """Same panels plus ``levels`` more geometric panels on each side of 0."""
        if self.origin_floor is None:
            raise GridError("grid has no origin to refine toward")
        out = []
        for a, b in self.panels:
            if b == 0.0:
                edges = [a * self.ratio ** k for k in range(levels + 1)] + [0.0]
                out.extend(zip(edges[:-1], edges[1:]))
            elif a == 0.0:
                edges = [0.0] + [b * self.ratio ** k for k in range(levels, -1, -1)]
                out.extend(zip(edges[:-1], edges[1:]))
            else:
                out.append((a, b))
        return QuadratureGrid(
            self.interval,
            tuple(out),
            self.nodes_per_panel,
            self.origin_floor * self.ratio**levels,
            self.include_origin,
            self.ratio,
        )

    def quadrature(self) -> Tuple[np.ndarray, np.ndarray]:
        """Nodes and weights, panel by panel from left to right."""
        if "quad" in self._cache:
            return self._cache["quad"]
        t, w = gauss_legendre(self.nodes_per_panel)
        xs, ws = [], []
        for a, b in self.panels:
            if a == 0.0 or b == 0.0:
                d = b - a
                u = 0.5 * (t + 1.0)
                sub = d * u**TAIL_POWER
                jac = 0.5 * d * TAIL_POWER * u ** (TAIL_POWER - 1) * w
                if b == 0.0:
                    xs.append(-sub[::-1])
                    ws.append(jac[::-1])
                else:
                    xs.append(sub)
                    ws.append(jac)
            else:
                xs.append(0.5 * (a + b) + 0.5 * (b - a) * t)
                ws.append(0.5 * (b - a) * w)
        out = (np.concatenate(xs), np.concatenate(ws))
        for arr in out:
            arr.setflags(write=False)
        self._cache["quad"] = out
        return out

    def sup_nodes(self) -> np.ndarray:
        """Sorted constraint grid for discrete sup norms."""
        if "sup" in self._cache:
            return self._cache["sup"]
        t, _ = gauss_legendre(self.nodes_per_panel)
        pts = []
        for a, b in self.panels:
            if a != 0.0:
                pts.append([a])
            if a == 0.0 or b == 0.0:
                continue
            pts.append(0.5 * (a + b) + 0.5 * (b - a) * t)
        last = self.panels[-1][1]
        if last != 0.0:
            pts.append([last])
        if self.include_origin:
            pts.append([0.0])
        out = np.unique(np.concatenate([np.asarray(p, dtype=float) for p in pts]))
        out.setflags(write=False)
        self._cache["sup"] = out
        return out

    def __len__(self):
        return len(self.panels) * self.nodes_per_panel


def default_grid(resolution: int = 0, *, floor: float = DEFAULT_FLOOR, include_origin: bool = False,
                 nodes_per_panel: int = DEFAULT_NODES) -> QuadratureGrid:
    return QuadratureGrid.graded(
        -1.0, 1.0, floor=floor, resolution=resolution, include_origin=include_origin,
        nodes_per_panel=nodes_per_panel,
    )


def _values(f: Callable, x: np.ndarray) -> np.ndarray:
    v = np.asarray(f(x))
    if v.shape != x.shape:
        v = np.broadcast_to(v, x.shape)
    if not np.all(np.isfinite(v)):
        bad = x[~np.isfinite(v)]
        raise NonFinite(f"non-finite function value at x = {bad[0]!r}")
    return v


def lp_quasinorm(
    f: Callable,
    interval: Optional[Sequence[float]] = None,
    pnorm: PNorm | float | str = 2.0,
    grid: Optional[QuadratureGrid] = None,
) -> float:
    """(integral of |f|^p)^(1/p) over the grid's interval; grid maximum for p = inf."""
    pnorm = PNorm.parse(pnorm)
    if grid is None:
        lo, hi = interval if interval is not None else (-1.0, 1.0)
        grid = QuadratureGrid.graded(lo, hi)
    if interval is not None and tuple(map(float, interval)) != grid.interval:
        raise GridError(f"grid tiles {grid.interval}, not {tuple(interval)}")
    if pnorm.is_inf:
        x = grid.sup_nodes()
        return float(np.max(np.abs(_values(f, x))))
    x, w = grid.quadrature()
    return weighted_pnorm(np.abs(_values(f, x)), w, pnorm.p)


def weighted_pnorm(absvals: np.ndarray, weights: np.ndarray, p: float) -> float:
    """(sum w |v|^p)^(1/p), scaled by max |v| so large p does not underflow."""
    if math.isinf(p):
        return float(np.max(absvals)) if absvals.size else 0.0
    scale = float(np.max(absvals)) if absvals.size else 0.0
    if scale == 0.0:
        return 0.0
    s = float(np.dot(weights, (absvals / scale) ** p))
    return scale * s ** (1.0 / p)


# Lanczos approximation, g = 7, nine terms; relative error below 2e-15 for Re z >= 0.5.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def complex_gamma(z: complex) -> complex:
    """Gamma function of a complex argument (Lanczos plus reflection)."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * complex_gamma(1.0 - z))
    z -= 1.0
    acc = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        acc += _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * cmath.exp((z + 0.5) * cmath.log(t) - t) * acc


def bracketed_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
                   maxiter: int = 200) -> float:
    """Brent's method: inverse quadratic / secant steps safeguarded by bisection.

    Stops once the bracket is no wider than ``tol`` and |f| at the returned
    point is at most ``tol`` (or f is exactly zero there).
    """
    a, b = float(lo), float(hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0 or not (math.isfinite(fa) and math.isfinite(fb)):
        raise NoBracket(f"f({a}) = {fa} and f({b}) = {fb} do not bracket a root")

    c, fc = a, fa
    d = e = b - a
    for _ in range(maxiter):
        if fb * fc > 0.0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        width = abs(c - b)
        if fb == 0.0 or (width <= tol and abs(fb) <= tol):
            return b
        tol1 = 2.0 * 2.220446049250313e-16 * abs(b) + 0.25 * tol
        xm = 0.5 * (c - b)
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q, r = fa / fc, fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += math.copysign(tol1, xm)
        fb = f(b)
    return b

"""The target family |x|^(alpha + i beta) and its half-line generalization.

A :class:`FunctionSpec` is callable on scalars and numpy arrays::

    >>> f = FunctionSpec(alpha=2.0, beta=0.0)
    >>> f(-3.0)
    (9+0j)

The ``cos_part``/``sin_part`` variants are the real and imaginary parts of the
full function, which for the default weights are |x|^a cos(b log|x|) and
|x|^a sin(b log|x|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import DomainError

VARIANTS = ("full", "cos_part", "sin_part")
_ALIASES = {"cos": "cos_part", "sin": "sin_part", "c": "cos_part", "s": "sin_part"}


def normalize_variant(variant: str) -> str:
    v = _ALIASES.get(variant, variant)
    if v not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    return v


@dataclass(frozen=True)
class FunctionSpec:
    """Target function F(x) = w(x) |x|^(alpha + i beta), or its real/imaginary part.

    ``halfline_weights`` is the pair (a, b): the factor on x > 0 and on x <= 0.
    ``None`` means (1, 1), the plain even family.
    """

    alpha: float
    beta: float = 0.0
    variant: str = "full"
    halfline_weights: Optional[Tuple[complex, complex]] = None

    def __post_init__(self):
        alpha, beta = float(self.alpha), float(self.beta)
        if not (math.isfinite(alpha) and math.isfinite(beta)):
            raise DomainError("alpha and beta must be finite")
        if alpha <= -1.0:
            raise DomainError(f"alpha must exceed -1, got {alpha}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "variant", normalize_variant(self.variant))
        if self.halfline_weights is not None:
            a, b = (complex(w) for w in self.halfline_weights)
            if abs(a) + abs(b) == 0.0:
                raise DomainError("halfline weights must satisfy |a| + |b| > 0")
            object.__setattr__(self, "halfline_weights", (a, b))

    @property
    def weights(self) -> Tuple[complex, complex]:
        return self.halfline_weights if self.halfline_weights is not None else (1 + 0j, 1 + 0j)

    @property
    def is_real(self) -> bool:
        """True when every value is real."""
        if self.variant != "full":
            return True
        a, b = self.weights
        return self.beta == 0.0 and a.imag == 0.0 and b.imag == 0.0

    @property
    def is_even(self) -> bool:
        a, b = self.weights
        return a == b

    @property
    def continuous_at_origin(self) -> bool:
        """False when the function has no limit (or is unbounded) at 0."""
        return self.alpha > 0.0 or (self.alpha == 0.0 and self.beta == 0.0)

    def __call__(self, x):
        return eval_function(self, x)

    def to_dict(self) -> dict:
        d = {"alpha": self.alpha, "beta": self.beta, "variant": self.variant}
        if self.halfline_weights is not None:
            d["halfline_weights"] = [[w.real, w.imag] for w in self.halfline_weights]
        return d


def eval_function(spec: FunctionSpec, x):
    """Evaluate ``spec`` at real ``x`` (scalar or array).

    Returns complex values for the ``full`` variant and floats otherwise.
    Raises DomainError at x = 0 when alpha <= 0 (no limit exists there,
    except for the constant alpha = beta = 0).
    """
    scalar = np.ndim(x) == 0
    xs = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xs)):
        raise DomainError("x must be finite")
    zero = xs == 0.0
    if np.any(zero) and spec.alpha <= 0.0 and not (spec.alpha == 0.0 and spec.beta == 0.0):
        raise DomainError(f"f is undefined at x = 0 for alpha = {spec.alpha} <= 0")

    ax = np.abs(xs)
    with np.errstate(divide="ignore", invalid="ignore"):
        logx = np.log(np.where(zero, 1.0, ax))
        modulus = np.where(zero, 0.0, np.exp(spec.alpha * logx))
    phase = spec.beta * logx
    vals = modulus * np.exp(1j * phase)
    if spec.alpha == 0.0 and spec.beta == 0.0:
        vals = np.where(zero, 1.0 + 0j, vals)
    if spec.halfline_weights is not None:
        a, b = spec.halfline_weights
        vals = np.where(xs > 0.0, a * vals, b * vals)

    if spec.variant == "cos_part":
        vals = vals.real
    elif spec.variant == "sin_part":
        vals = vals.imag
    if scalar:
        return vals.item()
    return vals


@dataclass(frozen=True)
class DilationFactor:
    """How F transforms under x -> scale * x for scale > 0.

    F(scale x) = modulus_factor * exp(i rotation) * F(x); on the pair of
    real components the action is ``modulus_factor`` times the rotation
    matrix returned by :attr:`mixing`.
    """

    scale: float
    modulus_factor: float
    rotation: float

    @property
    def mixing(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        return ((c, -s), (s, c))

    @property
    def multiplier(self) -> complex:
        return self.modulus_factor * complex(math.cos(self.rotation), math.sin(self.rotation))


def dilate(spec: FunctionSpec, eta: float):
    """Return ``(DilationFactor, mixing)`` for the substitution x -> eta * x.

    ``mixing`` is the 2x2 matrix M with
    (F_c(eta x), F_s(eta x)) = eta^alpha * M (F_c(x), F_s(x)).
    """
    eta = float(eta)
    if not (eta > 0.0 and math.isfinite(eta)):
        raise DomainError(f"dilation scale must be positive, got {eta}")
    factor = DilationFactor(
        scale=eta,
        modulus_factor=eta ** spec.alpha,
        rotation=spec.beta * math.log(eta),
    )
    return factor, factor.mixing


def dilated_target(spec: FunctionSpec, eta: float) -> Callable:
    """x -> spec(eta x), computed through the dilation algebra rather than directly."""
    factor, ((m00, m01), (m10, m11)) = dilate(spec, eta)
    full = FunctionSpec(spec.alpha, spec.beta, "full", spec.halfline_weights)
    k = factor.modulus_factor

    def g(x):
        v = np.asarray(full(x))
        fc, fs = v.real, v.imag
        c = k * (m00 * fc + m01 * fs)
        s = k * (m10 * fc + m11 * fs)
        if spec.variant == "cos_part":
            return c
        if spec.variant == "sin_part":
            return s
        return c + 1j * s

    return g

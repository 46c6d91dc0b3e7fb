"""Closed-form Bernstein constants for f = |x|^(alpha + i beta) and the root mu."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError
from .numerics import PNorm, bracketed_root, complex_gamma

# Provenance tags: which closed form produced a constant.
L1_SERIES = "l1_series"  # p = 1, real alpha
L2_REAL = "l2_real"  # p = 2, beta = 0
L2_COMPLEX = "l2_complex"  # p = 2, any beta
LINF_LOG = "linf_log"  # p = inf, alpha = 0
NONE = "none"
PROVENANCES = (L1_SERIES, L2_REAL, L2_COMPLEX, LINF_LOG, NONE)

SERIES_TOL = 1e-13
MAX_BETA = 40.0
_HEAD_TERMS = 8
_MAX_EULER_TERMS = 400


@dataclass(frozen=True)
class BernsteinConstant:
    value: float
    p: PNorm
    alpha: float
    beta: float = 0.0
    provenance: str = NONE
    series_terms: int = 0
    tolerance: float = 0.0
    note: str = ""

    def __post_init__(self):
        if not self.value >= 0.0:
            raise DomainError(f"Bernstein constants are nonnegative, got {self.value}")
        if self.provenance not in PROVENANCES:
            raise DomainError(f"unknown provenance {self.provenance!r}")

    def __float__(self):
        return float(self.value)

    def to_dict(self) -> dict:
        return {
            "p": self.p.label(),
            "alpha": self.alpha,
            "beta": self.beta,
            "value": self.value,
            "provenance": self.provenance,
        }


def _is_even_integer(a: float) -> bool:
    return a == math.floor(a) and int(a) % 2 == 0


def dirichlet_beta_direct(s: float, terms: int) -> float:
    """Partial sum of sum_k (-1)^k / (2k+1)^s, averaged over the last two for a cheaper tail."""
    total = prev = 0.0
    for k in range(terms):
        prev = total
        total += (-1.0) ** k / (2 * k + 1) ** s
    return 0.5 * (total + prev) if terms > 1 else total


def dirichlet_beta(s: float, tol: float = SERIES_TOL):
    """sum_{k>=0} (-1)^k / (2k+1)^s for s > 0. Returns (value, terms used).

    A short head is summed directly; the tail is Euler-transformed,
    sum_{k>=N} (-1)^k a_k = (-1)^N sum_j (-1)^j (Delta^j a)_N / 2^(j+1),
    which converges geometrically for completely monotone a_k.
    """
    if not s > 0.0:
        raise DomainError(f"alternating series needs s > 0, got {s}")
    head = sum((-1.0) ** k / (2 * k + 1) ** s for k in range(_HEAD_TERMS))
    # row[i] holds (-1)^j Delta^j a at index N + i
    a = [1.0 / (2 * (_HEAD_TERMS + j) + 1) ** s for j in range(_MAX_EULER_TERMS + 1)]
    tail = 0.0
    row = a
    for j in range(_MAX_EULER_TERMS):
        term = row[0] / 2.0 ** (j + 1)
        tail += term
        # the neglected remainder is about the size of the last term
        if abs(term) < 1e-3 * tol:
            break
        row = [row[i] - row[i + 1] for i in range(len(row) - 1)]
    sign = -1.0 if _HEAD_TERMS % 2 else 1.0
    return head + sign * tail, _HEAD_TERMS + j + 1


def bernstein_l1(alpha: float) -> BernsteinConstant:
    """A_1(|x|^alpha)_1 = 8 |sin(alpha pi/2)| Gamma(alpha+1)/pi * sum (-1)^k/(2k+1)^(alpha+2)."""
    alpha = float(alpha)
    if not alpha > -1.0:
        raise DomainError(f"bernstein_l1 needs alpha > -1, got {alpha}")
    p = PNorm(1.0)
    if _is_even_integer(alpha):
        return BernsteinConstant(0.0, p, alpha, 0.0, L1_SERIES, 0, 0.0, "polynomial target")
    series, terms = dirichlet_beta(alpha + 2.0)
    pref = 8.0 * abs(math.sin(0.5 * math.pi * alpha)) * math.gamma(alpha + 1.0) / math.pi
    return BernsteinConstant(pref * series, p, alpha, 0.0, L1_SERIES, terms, SERIES_TOL)


def complex_sin(z: complex) -> complex:
    """sin(x + iy) = sin x cosh y + i cos x sinh y, with the parts kept separate."""
    x, y = z.real, z.imag
    return complex(math.sin(x) * math.cosh(y), math.cos(x) * math.sinh(y))


def bernstein_l2_real(alpha: float) -> float:
    """The beta = 0 form: 2 |sin(alpha pi/2)| Gamma(alpha+1) / sqrt(pi (2 alpha + 1))."""
    return 2.0 * abs(math.sin(0.5 * math.pi * alpha)) * math.gamma(alpha + 1.0) / math.sqrt(
        math.pi * (2.0 * alpha + 1.0)
    )


def bernstein_l2(alpha: float, beta: float = 0.0) -> BernsteinConstant:
    """A_1(|x|^(alpha + i beta))_2 = 2 |sin(s pi/2) Gamma(s+1)| / sqrt(pi (2 alpha + 1)), s = alpha + i beta."""
    alpha, beta = float(alpha), float(beta)
    if not alpha > -0.5:
        raise DomainError(f"bernstein_l2 needs alpha > -1/2, got {alpha}")
    if abs(beta) > MAX_BETA:
        raise DomainError(f"|beta| <= {MAX_BETA:g} required, got {beta}")
    p = PNorm(2.0)
    if beta == 0.0:
        if _is_even_integer(alpha):
            return BernsteinConstant(0.0, p, alpha, 0.0, L2_REAL, note="polynomial target")
        return BernsteinConstant(bernstein_l2_real(alpha), p, alpha, 0.0, L2_REAL)
    s = complex(alpha, beta)
    val = 2.0 * abs(complex_sin(0.5 * math.pi * s) * complex_gamma(s + 1.0))
    val /= math.sqrt(math.pi * (2.0 * alpha + 1.0))
    return BernsteinConstant(val, p, alpha, beta, L2_COMPLEX)


def bernstein_linf_log(beta: float, sigma: float = 1.0, variant: str = "full") -> BernsteinConstant:
    """A_sigma(|x|^(i beta))_inf = 1 for every sigma > 0; the best entire approximant is 0."""
    from .functions import normalize_variant

    beta, sigma = float(beta), float(sigma)
    normalize_variant(variant)
    if beta == 0.0:
        raise DomainError("beta = 0 gives the constant function 1, whose constant is 0; rejected")
    if not sigma > 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    return BernsteinConstant(1.0, PNorm(math.inf), 0.0, beta, LINF_LOG,
                             note="best entire approximant is the zero function")


def mu_equation(x: float) -> float:
    r = math.hypot(x, 1.0)
    return r / x - math.log(r + x)


def mu_constant(tol: float = 1e-12) -> float:
    """Positive root of sqrt(x^2+1)/x = log(sqrt(x^2+1) + x), about 1.508879."""
    tol = float(tol)
    if not 0.0 < tol <= 1e-6:
        raise DomainError(f"tol must lie in (0, 1e-6], got {tol}")
    return bracketed_root(mu_equation, 1.0, 2.0, tol=tol)


def reference_constant(alpha: float, beta: float, p, variant: str = "full") -> Optional[BernsteinConstant]:
    """The closed form matching (alpha, beta, p), or None when none is known."""
    pn = PNorm.parse(p)
    try:
        if pn.p == 1.0 and beta == 0.0:
            return bernstein_l1(alpha)
        if pn.p == 2.0 and (beta == 0.0 or variant == "full"):
            return bernstein_l2(alpha, beta)
        if pn.is_inf and alpha == 0.0 and beta != 0.0:
            return bernstein_linf_log(beta, 1.0, variant)
    except DomainError:
        return None
    return None

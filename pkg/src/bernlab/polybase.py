"""Polynomials with complex coefficients in a Chebyshev or monomial basis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as M

from .errors import DegreeTooLarge, DomainError

CHEBYSHEV = "chebyshev_first_kind"
MONOMIAL = "monomial"
MAX_CONVERSION_DEGREE = 64


@dataclass(frozen=True)
class Polynomial:
    """``coeffs[k]`` multiplies T_k(t) or t**k, where t maps ``reference_interval`` to [-1, 1].

    For the monomial basis the variable is x itself (no affine map), so that
    coefficients are the plain c_k of sum c_k x**k.
    """

    coeffs: Tuple[complex, ...]
    basis: str = CHEBYSHEV
    reference_interval: Tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        cs = tuple(complex(c) for c in np.atleast_1d(np.asarray(self.coeffs)))
        if not cs:
            raise DomainError("a polynomial needs at least one coefficient")
        if self.basis not in (CHEBYSHEV, MONOMIAL):
            raise DomainError(f"unknown basis {self.basis!r}")
        lo, hi = (float(v) for v in self.reference_interval)
        if not hi > lo:
            raise DomainError("reference interval must have hi > lo")
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "reference_interval", (lo, hi))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0.0 for c in self.coeffs)

    def __call__(self, x):
        return poly_eval(self, x)

    def to_dict(self) -> dict:
        return {
            "basis": self.basis,
            "interval": list(self.reference_interval),
            "degree": self.degree,
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Polynomial":
        coeffs = [complex(re, im) for re, im in d["coeffs"]]
        if len(coeffs) != int(d["degree"]) + 1:
            raise DomainError("degree does not match coefficient count")
        return cls(tuple(coeffs), d["basis"], tuple(d["interval"]))


def _to_reference(P: Polynomial, x: np.ndarray) -> np.ndarray:
    lo, hi = P.reference_interval
    if lo == -1.0 and hi == 1.0:
        return x
    return (2.0 * x - (lo + hi)) / (hi - lo)


def clenshaw(coeffs: Sequence[complex], t):
    """sum c_k T_k(t) by the backward three-term recurrence."""
    t = np.asarray(t, dtype=float)
    b1 = np.zeros(t.shape, dtype=complex)
    b2 = np.zeros(t.shape, dtype=complex)
    for c in coeffs[:0:-1]:
        b1, b2 = 2.0 * t * b1 - b2 + c, b1
    return t * b1 - b2 + coeffs[0]


def horner(coeffs: Sequence[complex], x):
    x = np.asarray(x, dtype=float)
    acc = np.zeros(x.shape, dtype=complex)
    for c in coeffs[::-1]:
        acc = acc * x + c
    return acc


def poly_eval(P: Polynomial, x):
    scalar = np.ndim(x) == 0
    xs = np.asarray(x, dtype=float)
    if P.basis == CHEBYSHEV:
        v = clenshaw(P.coeffs, _to_reference(P, xs))
    else:
        v = horner(P.coeffs, xs)
    return v.item() if scalar else v


def to_monomial(P: Polynomial) -> Polynomial:
    """Rewrite as sum c_k x**k, x ranging over the reference interval."""
    if P.basis == MONOMIAL:
        return P
    if P.degree > MAX_CONVERSION_DEGREE:
        raise DegreeTooLarge(f"degree {P.degree} exceeds the conversion cap {MAX_CONVERSION_DEGREE}")
    c = P.array
    in_t = C.cheb2poly(c.real) + 1j * C.cheb2poly(c.imag) if len(c) > 1 else c
    lo, hi = P.reference_interval
    if (lo, hi) != (-1.0, 1.0):
        # t = s*x + o; expand sum a_k (s x + o)^k
        s, o = 2.0 / (hi - lo), -(lo + hi) / (hi - lo)
        out = np.zeros(len(in_t), dtype=complex)
        power = np.array([1.0 + 0j])
        for a in in_t:
            out[: len(power)] += a * power
            power = M.polymul(power, [o, s])
        in_t = out
    return Polynomial(tuple(in_t), MONOMIAL, P.reference_interval)


def to_chebyshev(P: Polynomial) -> Polynomial:
    if P.basis == CHEBYSHEV:
        return P
    if P.degree > MAX_CONVERSION_DEGREE:
        raise DegreeTooLarge(f"degree {P.degree} exceeds the conversion cap {MAX_CONVERSION_DEGREE}")
    c = P.array
    lo, hi = P.reference_interval
    if (lo, hi) != (-1.0, 1.0):
        # x = (hi - lo)/2 * t + (hi + lo)/2
        s, o = 0.5 * (hi - lo), 0.5 * (hi + lo)
        out = np.zeros(len(c), dtype=complex)
        power = np.array([1.0 + 0j])
        for a in c:
            out[: len(power)] += a * power
            power = M.polymul(power, [o, s])
        c = out
    cheb = C.poly2cheb(c.real) + 1j * C.poly2cheb(c.imag) if len(c) > 1 else c
    return Polynomial(tuple(cheb), CHEBYSHEV, P.reference_interval)


@dataclass(frozen=True)
class CoefficientBound:
    k: int
    coefficient: float
    bound: float
    ok: bool


@dataclass(frozen=True)
class CoefficientBoundReport:
    degree: int
    sup_norm: float
    rows: Tuple[CoefficientBound, ...]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "sup_norm": self.sup_norm,
            "passed": self.passed,
            "rows": [{"k": r.k, "abs_coeff": r.coefficient, "bound": r.bound, "ok": r.ok} for r in self.rows],
        }


def coeff_bound_check(P: Polynomial, sup_norm: float, degree: int | None = None,
                      rtol: float = 1e-12) -> CoefficientBoundReport:
    """Markov-type coefficient bound |c_k| <= n^k / k! * ||P||_inf on [-1, 1].

    ``degree`` is the n of the bound (defaults to the representation degree).
    ``rtol`` absorbs rounding in the basis conversion when the bound is tight
    (T_n attains it for k = n - 2j).
    """
    if P.reference_interval != (-1.0, 1.0):
        raise DomainError("coefficient bound is stated on [-1, 1]")
    n = P.degree if degree is None else int(degree)
    mono = to_monomial(P)
    rows: List[CoefficientBound] = []
    for k, c in enumerate(mono.coeffs):
        bound = (n**k / math.factorial(k)) * sup_norm if k <= n else 0.0
        mag = abs(c)
        rows.append(CoefficientBound(k, mag, bound, mag <= bound * (1.0 + rtol) + rtol * sup_norm))
    return CoefficientBoundReport(n, float(sup_norm), tuple(rows))

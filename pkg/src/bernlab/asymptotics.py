"""Experiment harness: scaled error tables, limit extrapolation, dilation
subsequences, the scaling identity and the explicit decay bound for band-limited
functions."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .best_approx import ApproxProblem, best_approximation
from .constants import BernsteinConstant, reference_constant
from .errors import BernlabError, DomainError, Overflow
from .functions import FunctionSpec, dilated_target
from .numerics import DEFAULT_FLOOR, PNorm, QuadratureGrid

RICHARDSON = "richardson_1overN"
AITKEN = "aitken"
EXTRAPOLATORS = (RICHARDSON, AITKEN)
COS_LOCKED = "cos_locked"
SIN_LOCKED = "sin_locked"
MAX_DILATION = 1e15


def scale_exponent(alpha: float, p: PNorm) -> float:
    """The power of n in n^(alpha + 1/p) E_n."""
    return alpha + p.inv


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    error: float
    scaled: float
    converged: bool = True


@dataclass(frozen=True)
class LimitEstimate:
    value: float
    method: str
    estimates: tuple = ()
    stable: bool = True

    def __float__(self):
        return float(self.value)


@dataclass
class ConvergenceReport:
    spec: FunctionSpec
    p: PNorm
    rows: List[ConvergenceRow] = field(default_factory=list)
    limit: Optional[LimitEstimate] = None
    reference: Optional[BernsteinConstant] = None
    failure: Optional[str] = None

    @property
    def degrees(self) -> List[int]:
        return [r.n for r in self.rows]

    @property
    def scaled(self) -> List[float]:
        return [r.scaled for r in self.rows]

    @property
    def limit_estimate(self) -> Optional[float]:
        return None if self.limit is None else self.limit.value

    @property
    def relative_gap(self) -> Optional[float]:
        if self.limit is None or self.reference is None or self.reference.value == 0.0:
            return None
        return abs(self.limit.value - self.reference.value) / self.reference.value

    @property
    def converged(self) -> bool:
        return self.failure is None and all(r.converged for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "p": self.p.label(),
            "rows": [
                {"n": r.n, "error": r.error, "scaled": r.scaled, "converged": r.converged}
                for r in self.rows
            ],
            "limit_estimate": self.limit_estimate,
            "limit_method": None if self.limit is None else self.limit.method,
            "limit_stable": None if self.limit is None else self.limit.stable,
            "reference": None if self.reference is None else self.reference.to_dict(),
            "relative_gap": self.relative_gap,
            "failure": self.failure,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "error", "scaled", "reference", "gap"])
        ref = None if self.reference is None else self.reference.value
        for r in self.rows:
            gap = "" if not ref else repr(abs(r.scaled - ref) / ref)
            w.writerow([r.n, repr(r.error), repr(r.scaled), "" if ref is None else repr(ref), gap])
        return buf.getvalue()


def _solve_row(spec: FunctionSpec, p: PNorm, n: int, floor: float) -> ConvergenceRow:
    res = best_approximation(ApproxProblem(spec, n, p, origin_floor=floor))
    scaled = n ** scale_exponent(spec.alpha, p) * res.error
    return ConvergenceRow(n, res.error, scaled, bool(res.converged))


def scaled_error_table(spec: FunctionSpec, p, degrees: Sequence[int], grid_floor: float = DEFAULT_FLOOR,
                       workers: int = 1, method: Optional[str] = RICHARDSON) -> ConvergenceReport:
    """Rows (n, E_n, n^(alpha+1/p) E_n) on [-1, 1], in increasing n.

    Rows are independent and may be solved on ``workers`` threads; the report
    is assembled in degree order either way. When a row fails the error is
    re-raised with the finished rows attached as ``exc.partial_report``.
    """
    pn = PNorm.parse(p)
    degrees = [int(n) for n in degrees]
    if not degrees:
        raise DomainError("degrees must be nonempty")
    if any(b <= a for a, b in zip(degrees, degrees[1:])) or degrees[0] < 1:
        raise DomainError(f"degrees must be positive and strictly increasing, got {degrees}")
    report = ConvergenceReport(spec, pn, reference=reference_constant(spec.alpha, spec.beta, pn, spec.variant))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_solve_row, spec, pn, n, grid_floor) for n in degrees]
            outcomes = []
            for fut in futures:
                try:
                    outcomes.append(fut.result())
                except BernlabError as exc:
                    outcomes.append(exc)
    else:
        outcomes = []
        for n in degrees:
            try:
                outcomes.append(_solve_row(spec, pn, n, grid_floor))
            except BernlabError as exc:
                outcomes.append(exc)
                break

    for n, out in zip(degrees, outcomes):
        if isinstance(out, BernlabError):
            report.failure = f"n={n}: {out}"
            out.partial_report = report
            raise out
        report.rows.append(out)

    if method is not None and len(report.rows) >= 3:
        report.limit = extrapolate_limit(report, method)
    return report


def _stable_prefix(estimates: List[float]) -> tuple:
    """Index of the last estimate before successive differences start growing."""
    diffs = [abs(b - a) for a, b in zip(estimates, estimates[1:])]
    scale = max((abs(e) for e in estimates), default=0.0)
    slack = 1e-12 * max(scale, 1e-300)
    for i in range(1, len(diffs)):
        if diffs[i] > diffs[i - 1] + slack:
            return i, False
    return len(estimates) - 1, True


def extrapolate_limit(report, method: str = RICHARDSON, degrees: Optional[Sequence[int]] = None) -> LimitEstimate:
    """Estimate lim S_n from a scaled column.

    ``report`` is a ConvergenceReport or a plain sequence of values; plain
    values need ``degrees`` for Richardson and otherwise are taken at
    n = 1, 2, 4, ... . Richardson assumes S_n = L + c/n and combines
    consecutive pairs; Aitken's delta-squared runs over consecutive triples.
    If successive estimates start to diverge the last stable one is
    returned with ``stable=False``.
    """
    if isinstance(report, ConvergenceReport):
        values = report.scaled
        ns = report.degrees
    else:
        values = [float(v) for v in report]
        ns = list(degrees) if degrees is not None else [2 ** k for k in range(len(values))]
    if method not in EXTRAPOLATORS:
        raise DomainError(f"unknown extrapolation method {method!r}; use one of {EXTRAPOLATORS}")
    if len(values) < 3:
        raise DomainError("extrapolation needs at least three rows")
    if len(ns) != len(values):
        raise DomainError("degrees and values differ in length")
    if not all(math.isfinite(v) for v in values):
        raise DomainError("scaled column must be finite")

    if method == RICHARDSON:
        est = [
            (n2 * s2 - n1 * s1) / (n2 - n1)
            for (n1, s1), (n2, s2) in zip(zip(ns, values), zip(ns[1:], values[1:]))
        ]
    else:
        est = []
        for s0, s1, s2 in zip(values, values[1:], values[2:]):
            d1, d2 = s1 - s0, s2 - s1
            den = d2 - d1
            if den == 0.0 or abs(den) <= 1e-15 * max(abs(s2), 1e-300):
                est.append(s2)
            else:
                est.append(s2 - d2 * d2 / den)
    idx, stable = _stable_prefix(est)
    return LimitEstimate(est[idx], method, tuple(est), stable)


@dataclass(frozen=True)
class SubsequencePlan:
    """Degrees at which x -> a x locks the phase of |x|^(i beta).

    cos_locked: beta log a = pi k, so the dilation maps each real component
    to plus or minus itself. sin_locked: beta log a = pi (k + 1/2), so the
    components are swapped up to sign.
    """

    beta: float
    kind: str
    ks: tuple
    degrees: tuple
    dilations: tuple

    def phase_residuals(self) -> List[float]:
        """Distance of beta log a from its target class modulo pi."""
        shift = 0.0 if self.kind == COS_LOCKED else 0.5 * math.pi
        out = []
        for a in self.dilations:
            phase = abs(self.beta) * math.log(a) - shift
            out.append(abs(math.remainder(phase, math.pi)))
        return out

    def check_invariants(self, tol: float = 1e-12) -> bool:
        floors_ok = all(d == math.floor(a) for d, a in zip(self.degrees, self.dilations))
        return floors_ok and max(self.phase_residuals(), default=0.0) <= tol

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "kind": self.kind,
            "ks": list(self.ks),
            "degrees": list(self.degrees),
            "dilations": list(self.dilations),
        }


def subsequence_degrees(beta: float, kind: str, ks: Sequence[int]) -> SubsequencePlan:
    """n_k = floor(exp(pi k/|beta|)) or m_k = floor(exp((2k+1) pi/(2|beta|)))."""
    beta = float(beta)
    if beta == 0.0:
        raise DomainError("beta must be nonzero")
    if kind not in (COS_LOCKED, SIN_LOCKED):
        raise DomainError(f"kind must be {COS_LOCKED!r} or {SIN_LOCKED!r}, got {kind!r}")
    ks = tuple(int(k) for k in ks)
    if not ks or ks[0] < 1 or any(b <= a for a, b in zip(ks, ks[1:])):
        raise DomainError(f"ks must be positive and increasing, got {list(ks)}")
    b = abs(beta)
    dil = []
    for k in ks:
        expo = math.pi * k / b if kind == COS_LOCKED else (2 * k + 1) * math.pi / (2.0 * b)
        if expo > math.log(MAX_DILATION):
            raise Overflow(f"dilation exp({expo:.6g}) exceeds {MAX_DILATION:g}")
        dil.append(math.exp(expo))
    return SubsequencePlan(beta, kind, ks, tuple(int(math.floor(a)) for a in dil), tuple(dil))


@dataclass(frozen=True)
class ScalingReport:
    lhs: float
    rhs: float
    eta: float
    p: PNorm
    n: int
    a: float

    @property
    def discrepancy(self) -> float:
        """Relative gap, or the absolute gap when both sides are at rounding level."""
        gap = abs(self.lhs - self.rhs)
        big = max(abs(self.lhs), abs(self.rhs))
        return gap / big if big > 1e-13 else gap

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "eta": self.eta, "p": self.p.label(),
                "n": self.n, "a": self.a, "discrepancy": self.discrepancy}


def scaling_identity_check(spec: FunctionSpec, p, n: int, eta: float, a: float = 1.0,
                           grid_floor: float = DEFAULT_FLOOR) -> ScalingReport:
    """Both sides of E_n(f, L_p[-a, a]) = |eta|^(1/p) E_n(f(eta .), L_p[-a/|eta|, a/|eta|]).

    The right side is solved for the generic callable x -> f(eta x), built
    through the dilation algebra, so the two runs share no evaluation path.
    """
    pn = PNorm.parse(p)
    eta, a = float(eta), float(a)
    if eta == 0.0 or not math.isfinite(eta):
        raise DomainError(f"eta must be finite and nonzero, got {eta}")
    if not a > 0.0:
        raise DomainError(f"a must be positive, got {a}")
    left = ApproxProblem(spec, n, pn, (-a, a), origin_floor=grid_floor)
    lhs = best_approximation(left).error

    src = spec
    if eta < 0.0:
        wa, wb = spec.weights
        src = FunctionSpec(spec.alpha, spec.beta, spec.variant, (wb, wa))
    g = dilated_target(src, abs(eta))
    b = a / abs(eta)
    grid = QuadratureGrid.graded(-1.0, 1.0, floor=grid_floor, resolution=n,
                                 include_origin=spec.continuous_at_origin)
    right = ApproxProblem(
        g, n, pn, (-b, b), grid=grid,
        symmetry_hint="even" if spec.is_even else "none",
        discrete=left.use_discrete(),
        is_complex=not spec.is_real,
    )
    rhs = abs(eta) ** pn.inv * best_approximation(right).error
    return ScalingReport(lhs, rhs, eta, pn, n, a)


def dilation_transfer_check(beta: float, n: int, k: int = 1, variant: str = "cos_part",
                            grid_floor: float = DEFAULT_FLOOR) -> tuple:
    """Discrete L_inf errors of |x|^(i beta) components on [-1, 1] and [-1/a, 1/a], a = n_k dilation.

    With beta log a = pi k the target on the small interval is plus or minus
    the original one, so the two errors agree up to grid effects.
    """
    plan = subsequence_degrees(beta, COS_LOCKED, [k])
    a = plan.dilations[0]
    spec = FunctionSpec(0.0, beta, variant)
    inf = PNorm(math.inf)
    e1 = best_approximation(ApproxProblem(spec, n, inf, origin_floor=grid_floor)).error
    e2 = best_approximation(ApproxProblem(spec, n, inf, (-1.0 / a, 1.0 / a), origin_floor=grid_floor)).error
    return e1, e2, a


TEST_FUNCTIONS = ("cosine", "sinc_power", "constant")


def band_limited(test_fn: str, sigma: float):
    """A type-sigma entire function with sup norm 1 on the line."""
    if test_fn == "cosine":
        return lambda x: np.cos(sigma * np.asarray(x, dtype=float))
    if test_fn == "sinc_power":
        # (sin(sigma x/2) / (sigma x/2))^2; np.sinc(y) = sin(pi y)/(pi y)
        return lambda x: np.sinc(sigma * np.asarray(x, dtype=float) / (2.0 * math.pi)) ** 2
    if test_fn == "constant":
        return lambda x: np.ones_like(np.asarray(x, dtype=float))
    raise DomainError(f"test_fn must be one of {TEST_FUNCTIONS}, got {test_fn!r}")


@dataclass(frozen=True)
class DecayBoundParams:
    sigma: float
    tau: float
    C: float = 0.0
    C7: float = field(init=False)
    C8: float = field(init=False)

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if not 0.0 < self.tau < 1.0:
            raise DomainError(f"tau must lie in (0, 1), got {self.tau}")
        if not self.C >= 0.0:
            raise DomainError(f"C must be nonnegative, got {self.C}")
        object.__setattr__(self, "C7", decay_c7(self.tau, self.C))
        object.__setattr__(self, "C8", decay_c8(self.tau))

    def bound(self, n: int, sup_norm: float = 1.0) -> float:
        return self.C7 * math.exp(-self.C8 * n) * sup_norm


def decay_c7(tau: float, C: float = 0.0) -> float:
    r = math.sqrt(1.0 - tau * tau)
    return 2.0 * tau * math.exp(C * r) / r


def decay_c8(tau: float) -> float:
    r = math.sqrt(1.0 - tau * tau)
    return math.log1p(r) - math.log(tau) - r


@dataclass(frozen=True)
class BoundRow:
    n: int
    a_n: float
    error: float
    bound: float
    converged: bool

    @property
    def margin(self) -> float:
        return self.bound - self.error

    @property
    def passed(self) -> bool:
        return self.error <= self.bound


@dataclass
class DecayBoundReport:
    test_fn: str
    params: DecayBoundParams
    rows: List[BoundRow]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "test_fn": self.test_fn,
            "sigma": self.params.sigma,
            "tau": self.params.tau,
            "C": self.params.C,
            "C7": self.params.C7,
            "C8": self.params.C8,
            "passed": self.passed,
            "rows": [
                {"n": r.n, "a_n": r.a_n, "error": r.error, "bound": r.bound,
                 "margin": r.margin, "passed": r.passed, "converged": r.converged}
                for r in self.rows
            ],
        }


def decay_bound_check(test_fn: str = "cosine", sigma: float = 1.0, tau: float = 0.5, C: float = 0.0,
                      degrees: Sequence[int] = range(4, 21), offset: Optional[float] = None) -> DecayBoundReport:
    """E_n(g, L_inf[-a_n tau/sigma, a_n tau/sigma]) against C7 exp(-C8 n) ||g||.

    a_n = n + offset with offset <= C; the default offset C is the widest
    interval the bound allows. A violated bound is reported, not raised.
    """
    params = DecayBoundParams(float(sigma), float(tau), float(C))
    off = params.C if offset is None else float(offset)
    if off > params.C:
        raise DomainError(f"offset {off} exceeds C = {params.C}")
    g = band_limited(test_fn, params.sigma)
    rows = []
    for n in degrees:
        n = int(n)
        a_n = n + off
        if not a_n > 0.0:
            raise DomainError(f"a_n = {a_n} must be positive")
        h = a_n * params.tau / params.sigma
        res = best_approximation(ApproxProblem(g, n, PNorm(math.inf), (-h, h), symmetry_hint="even",
                                               is_complex=False))
        rows.append(BoundRow(n, a_n, res.error, params.bound(n), bool(res.converged)))
    return DecayBoundReport(test_fn, params, rows)

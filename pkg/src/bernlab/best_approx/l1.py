"""Best L1 approximation as a node-weighted linear program."""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from ..errors import DomainError, LPInfeasible
from ..functions import FunctionSpec
from .problem import ApproxProblem, ApproxResult, Reduced, sign_changes

POLYGON_SIDES = 16
LP_TOL = 1e-10
# nodes where |f| exceeds this multiple of the mean |f| are handled as fixed-sign tail
TAIL_RATIO = 1e8
_OPTIONS = {"primal_feasibility_tolerance": LP_TOL, "dual_feasibility_tolerance": LP_TOL}


def _linprog(cost, **kw):
    """Dual simplex, with interior point as fallback when simplex gives up."""
    res = linprog(cost, method="highs-ds", options=_OPTIONS, **kw)
    if res.status in (0, 2):
        return res
    return linprog(cost, method="highs-ipm", options=_OPTIONS, **kw)


def _split_tail(f, w):
    """Indices kept in the LP, and the tail where |f| dwarfs any admissible polynomial.

    On the tail |f - P| = |f| - Re(conj(u) P) + O(|P|^2/|f|) with u = f/|f|,
    so those nodes enter only as a linear cost on the coefficients. Without
    this, singular targets put values near 1e90 into the constraint matrix.
    """
    mod = np.abs(f)
    mean = float(np.dot(w, mod) / w.sum())
    tail = mod > TAIL_RATIO * max(mean, 1e-300)
    return np.nonzero(~tail)[0], np.nonzero(tail)[0]


def _solve_real(B, f, w, lin=None):
    """min sum w_i (u_i + v_i) + lin.c  s.t.  B c + u - v = f,  u, v >= 0."""
    N, m = B.shape
    eye = sp.identity(N, format="csr")
    A_eq = sp.hstack([sp.csr_matrix(B), eye, -eye], format="csr")
    cost = np.concatenate([np.zeros(m) if lin is None else lin, w, w])
    bounds = [(None, None)] * m + [(0.0, None)] * (2 * N)
    res = _linprog(cost, A_eq=A_eq, b_eq=f, bounds=bounds)
    return res, res.x[:m] if res.x is not None else None


def _solve_complex(B, f, w, lin=None):
    """Modulus epigraph |r_i| <= s_i outer-approximated by a regular 16-gon."""
    N, m = B.shape
    theta = 2.0 * math.pi * np.arange(POLYGON_SIDES) / POLYGON_SIDES
    ct, st = np.cos(theta), np.sin(theta)
    Bs = sp.csr_matrix(B)
    eye = sp.identity(N, format="csr")
    blocks, rhs = [], []
    for c_, s_ in zip(ct, st):
        # c_ Re r + s_ Im r <= s_i
        blocks.append(sp.hstack([-c_ * Bs, -s_ * Bs, -eye]))
        rhs.append(-(c_ * f.real + s_ * f.imag))
    A_ub = sp.vstack(blocks, format="csr")
    b_ub = np.concatenate(rhs)
    cost = np.concatenate([np.zeros(2 * m) if lin is None else lin, w])
    bounds = [(None, None)] * (2 * m) + [(0.0, None)] * N
    res = _linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds)
    if res.x is None:
        return res, None
    return res, res.x[:m] + 1j * res.x[m:2 * m]


def best_l1(problem: ApproxProblem) -> ApproxResult:
    """Discrete weighted L1 minimization over the quadrature nodes.

    Real targets give an exact LP. Complex targets use a 16-gon for the
    modulus; the reported error is always the true weighted sum of |r|.
    """
    if problem.pnorm.p != 1.0:
        raise DomainError("best_l1 needs p = 1")
    tgt = problem.target
    if isinstance(tgt, FunctionSpec) and tgt.alpha <= -1.0:
        raise DomainError("f is not integrable for alpha <= -1")
    red = Reduced(problem)
    t, w = red.quadrature()
    f = red.values(t)
    B = red.basis(t)
    real = not np.iscomplexobj(f) or not np.any(np.imag(f))
    f = np.real(f).astype(float) if real else f.astype(complex)
    keep, tail = _split_tail(f, w)
    u = f[tail] / np.abs(f[tail])
    wt = w[tail][:, None] * B[tail]
    if real:
        res, c = _solve_real(B[keep], f[keep], w[keep], -(u @ wt))
    else:
        lin = -np.concatenate([u.real @ wt, u.imag @ wt])
        res, c = _solve_complex(B[keep], f[keep], w[keep], lin)
    if res.status == 2:
        raise LPInfeasible("L1 linear program infeasible; grid values are corrupt")
    if c is None:
        raise LPInfeasible(f"L1 linear program failed: {res.message}")
    r = f - B @ c
    err = float(np.dot(w, np.abs(r)))
    diagnostics = {"nodes": int(len(t)), "tail_nodes": int(len(tail)), "lp_status": int(res.status)}
    # the linearized tail needs |P| well below |f| there
    tail_ok = bool(np.all(np.abs(B[tail] @ c) <= 1e-4 * np.abs(f[tail]))) if len(tail) else True
    if real:
        tt, rr = red.mirrored(t, np.real(r))
        locs = sign_changes(tt, rr)
        diagnostics["sign_changes"] = red.to_x(np.array(locs)).tolist()
        diagnostics["sign_change_count"] = len(locs)
    else:
        diagnostics["polygon_sides"] = POLYGON_SIDES
        diagnostics["lp_objective"] = float(res.fun) * red.scale()
    return ApproxResult(
        error=err * red.scale(),
        polynomial=red.polynomial(c),
        p=problem.pnorm,
        degree=problem.degree,
        interval=problem.interval,
        converged=res.status == 0 and tail_ok,
        discretized=False,
        iterations=int(getattr(res, "nit", 0) or 0),
        method="l1-lp",
        diagnostics=diagnostics,
    )

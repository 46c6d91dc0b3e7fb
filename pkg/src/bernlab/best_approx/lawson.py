"""Discrete complex minimax: Lawson reweighting, then cutting-plane polish.

Plain Lawson stalls on fine grids: nodes next to a peak have |r| within a
hair of the maximum and their weights decay very slowly. The Lawson sweeps
therefore only locate the extremal set; the optimum is then pinned down by
linear programs over half-plane cuts of the modulus cone |r_i| <= s,
adding a cut at angle arg r_i wherever a local maximum of |r| violates the
current level. Each LP is a relaxation (lower bound) and every iterate's
grid maximum is an upper bound, so the reported gap is certified.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linprog

from ..errors import DomainError, LPInfeasible
from .problem import ApproxProblem, ApproxResult, Reduced, require_bounded

MAX_WEIGHT_ITERATIONS = 500
GAP_RTOL = 1e-9
WARMUP = 60
MAX_CUT_ROUNDS = 60
_SEED_ANGLES = 8
_MAX_NEW_CUTS = 64


def _weighted_lsq(B, f, w):
    sw = np.sqrt(w)
    c, *_ = np.linalg.lstsq(B * sw[:, None], f * sw, rcond=None)
    return c


def lawson(B, f, max_iter, rtol):
    """Lawson iteration on the rows of B. Returns (c, upper, lower, iterations)."""
    N = len(f)
    w = np.full(N, 1.0 / N)
    best_c, best_upper, lower = np.zeros(B.shape[1], dtype=complex), np.inf, 0.0
    it = 0
    for it in range(1, max_iter + 1):
        c = _weighted_lsq(B, f, w)
        mod = np.abs(f - B @ c)
        upper = float(np.max(mod))
        lower = max(lower, float(np.sqrt(np.dot(w, mod**2))))
        if upper < best_upper:
            best_c, best_upper = c, upper
        if upper == 0.0 or best_upper - lower <= rtol * best_upper:
            break
        w = w * mod
        total = w.sum()
        if not total > 0.0:
            break
        w = w / total
    return best_c, best_upper, lower, it


def _local_maxima(mod: np.ndarray) -> np.ndarray:
    left = np.concatenate([[-np.inf], mod[:-1]])
    right = np.concatenate([mod[1:], [-np.inf]])
    return np.nonzero((mod >= left) & (mod >= right))[0]


def _cut_lp(B, f, rows, angles, bound, real):
    """min s over (Re c, Im c, s) subject to Re(e^{-i theta} r_i) <= s for each cut.

    With ``real`` the imaginary coefficients are dropped.
    """
    m = B.shape[1]
    ct, st = np.cos(angles), np.sin(angles)
    Bi = B[rows]
    blocks = [-ct[:, None] * Bi] if real else [-ct[:, None] * Bi, -st[:, None] * Bi]
    A = np.column_stack(blocks + [-np.ones(len(rows))])
    b = -(ct * f[rows].real + st * f[rows].imag)
    nvar = m * len(blocks)
    cost = np.zeros(nvar + 1)
    cost[-1] = 1.0
    res = linprog(
        cost, A_ub=A, b_ub=b, bounds=[(-bound, bound)] * nvar + [(0.0, None)],
        method="highs-ds",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status == 2:
        raise LPInfeasible("cutting-plane LP infeasible")
    if res.x is None:
        return None, 0.0
    c = res.x[:m] + (0j if real else 1j * res.x[m:2 * m])
    return c, float(res.x[-1])


def minimax_complex(problem: ApproxProblem, max_iter: int = MAX_WEIGHT_ITERATIONS,
                    rtol: float = GAP_RTOL) -> ApproxResult:
    """Complex Chebyshev approximation on the grid's sup nodes.

    The reported error is the smallest grid maximum of |r| over all iterates
    (the zero polynomial included); ``lower_bound`` in the diagnostics
    certifies the distance to the discrete optimum.
    """
    if not problem.pnorm.is_inf:
        raise DomainError("minimax_complex needs p = inf")
    require_bounded(problem)
    red = Reduced(problem)
    t = red.sup_nodes()
    f = red.values(t).astype(complex)
    B = red.basis(t)

    # real data: the real part of a best approximant is again best
    real = not np.any(f.imag)
    fmax = float(np.max(np.abs(f))) if f.size else 0.0
    best_c = np.zeros(B.shape[1], dtype=complex)
    best_upper = fmax

    c, upper, lower, used = lawson(B, f, min(WARMUP, max_iter), rtol)
    if upper < best_upper:
        best_c, best_upper = c, upper

    rows = np.array([], dtype=int)
    angles = np.array([])
    seen = np.zeros(len(t), dtype=bool)
    rounds = 0
    # Chebyshev coefficients of a best approximant obey |c_k| <= 2 ||P|| <= 4 ||f||
    bound = 4.0 * fmax + 1.0
    r = f - B @ best_c
    level = 0.0
    while best_upper - lower > rtol * best_upper and rounds < MAX_CUT_ROUNDS and used < max_iter:
        rounds += 1
        used += 1
        mod = np.abs(r)
        peaks = _local_maxima(mod)
        over = np.nonzero(mod > level)[0]
        over = over[np.argsort(-mod[over], kind="stable")][:_MAX_NEW_CUTS]
        cand = np.union1d(over, peaks[mod[peaks] > level]).astype(int)
        # a node entering the cut set gets a full polygon, later only the exact angle
        fresh = cand[~seen[cand]]
        seen[fresh] = True
        phase = np.angle(r[cand])
        fresh_phase = np.angle(r[fresh])
        seeds = 2 if real else _SEED_ANGLES
        rows = np.concatenate([rows, cand] + [fresh] * (seeds - 1))
        angles = np.concatenate(
            [angles, phase] + [fresh_phase + 2.0 * math.pi * k / seeds for k in range(1, seeds)]
        )
        c_lp, s_lp = _cut_lp(B, f, rows, angles, bound, real)
        if c_lp is None:
            break
        lower = max(lower, s_lp)
        level = s_lp
        r = f - B @ c_lp
        upper = float(np.max(np.abs(r)))
        if upper < best_upper:
            best_c, best_upper = c_lp, upper

    converged = best_upper == 0.0 or best_upper - lower <= rtol * best_upper
    scale = red.scale()
    return ApproxResult(
        error=best_upper * scale,
        polynomial=red.polynomial(best_c),
        p=problem.pnorm,
        degree=problem.degree,
        interval=problem.interval,
        converged=converged,
        discretized=True,
        iterations=used,
        method="lawson",
        diagnostics={
            "lower_bound": lower * scale,
            "cut_rounds": rounds,
            "grid_size": int(len(t)),
            "origin_floor": red.grid.origin_floor,
        },
    )

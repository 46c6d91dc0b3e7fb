"""Real minimax approximation by multi-point Remez exchange.

Continuum mode samples the residual densely, takes the largest |r| in each
run of constant sign, and polishes every peak with a bounded scalar search.
Targets without a limit at the origin are solved in discrete form: the exact
minimax over the grid's sup nodes, as a linear program.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.optimize import linprog, minimize_scalar

from ..errors import DomainError, LPInfeasible
from .problem import ApproxProblem, ApproxResult, Reduced, require_bounded, longest_alternation

log = logging.getLogger(__name__)

MAX_EXCHANGES = 50
PEAK_RTOL = 1e-10
_EPS = np.finfo(float).eps


def _initial_reference(red: Reduced, count: int) -> np.ndarray:
    if red.even:
        ref = np.cos(np.pi * np.arange(count) / (2.0 * (count - 1))) if count > 1 else np.array([1.0])
    else:
        ref = np.cos(np.pi * np.arange(count) / (count - 1)) if count > 1 else np.array([0.0])
    return np.sort(ref)


def _samples(red: Reduced, count: int) -> np.ndarray:
    k = max(400, 24 * count)
    geo = np.geomspace(1e-13, 0.1, 240)
    if red.even:
        pts = [np.cos(0.5 * np.pi * np.arange(k + 1) / k), geo]
    else:
        pts = [np.cos(np.pi * np.arange(k + 1) / k), geo, -geo]
    if red.problem.origin_ok():
        pts.append([0.0])
    s = np.unique(np.concatenate(pts))
    return s[(s >= red.lo) & (s <= 1.0)]


def _peaks(t, r, refine, bounds_lo, bounds_hi):
    """One extremum per maximal run of constant sign: (positions, values)."""
    sgn = np.sign(r)
    nz = np.nonzero(sgn)[0]
    if nz.size == 0:
        return np.array([]), np.array([])
    pos, val = [], []
    start = nz[0]
    run = [start]
    for i in nz[1:]:
        if sgn[i] == sgn[run[-1]]:
            run.append(i)
        else:
            pos_, val_ = _best_in_run(t, r, run, refine, bounds_lo, bounds_hi)
            pos.append(pos_)
            val.append(val_)
            run = [i]
    pos_, val_ = _best_in_run(t, r, run, refine, bounds_lo, bounds_hi)
    pos.append(pos_)
    val.append(val_)
    return np.array(pos), np.array(val)


def _best_in_run(t, r, run, refine, lo_bound, hi_bound):
    run = np.asarray(run)
    j = run[np.argmax(np.abs(r[run]))]
    tj, rj = t[j], r[j]
    if refine is None:
        return tj, rj
    a = t[j - 1] if j > 0 else lo_bound
    b = t[j + 1] if j + 1 < len(t) else hi_bound
    if b - a <= 0.0:
        return tj, rj
    s = 1.0 if rj > 0 else -1.0
    try:
        res = minimize_scalar(
            lambda u: -s * refine(u), bounds=(a, b), method="bounded",
            options={"xatol": max(1e-15, 1e-12 * (b - a))},
        )
        if res.success and -res.fun > s * rj:
            return float(res.x), s * -res.fun
    except DomainError:
        pass
    return tj, rj


def _trim(pos, val, count):
    while len(pos) > count:
        if abs(val[0]) <= abs(val[-1]):
            pos, val = pos[1:], val[1:]
        else:
            pos, val = pos[:-1], val[:-1]
    return pos, val


def remez_linf(problem: ApproxProblem) -> ApproxResult:
    """Best uniform approximation of a real target by polynomials of degree <= n."""
    if not problem.pnorm.is_inf:
        raise DomainError("remez_linf needs p = inf")
    if problem.real_target() is False:
        raise DomainError("remez_linf needs a real-valued target; use minimax_complex")
    require_bounded(problem)
    red = Reduced(problem)
    m = len(red.cols)
    count = m + 1

    if problem.use_discrete():
        return _discrete_linf(problem, red)
    t = _samples(red, count)
    refine_f, cols, n = red.f, red.cols, red.n

    def refine(u):
        return float(np.real(refine_f(np.array([u]))[0]) -
                     np.polynomial.chebyshev.chebvander(np.array([u]), n)[0, cols] @ c)

    fv = red.values(t)
    if np.iscomplexobj(fv):
        if np.any(np.imag(fv) != 0.0):
            raise DomainError("remez_linf needs a real-valued target; use minimax_complex")
        fv = fv.real
    B = red.basis(t)
    fscale = float(np.max(np.abs(fv))) if fv.size else 0.0

    ref = _initial_reference(red, count)
    best = None
    converged = False
    it = 0
    history = []
    for it in range(1, MAX_EXCHANGES + 1):
        fr = np.real(red.values(ref))
        A = np.column_stack([red.basis(ref), (-1.0) ** np.arange(count)])
        try:
            sol = np.linalg.solve(A, fr)
        except np.linalg.LinAlgError:
            sol = np.linalg.lstsq(A, fr, rcond=None)[0]
        c, level = sol[:-1], abs(sol[-1])
        r = fv - B @ c
        pos, val = _peaks(t, r, refine, red.lo, 1.0)
        # leveled reference residuals join the candidate set
        rref = fr - red.basis(ref) @ c
        allpos = np.concatenate([pos, ref])
        allval = np.concatenate([val, rref])
        order = np.argsort(allpos, kind="stable")
        allpos, allval = allpos[order], allval[order]
        pos, val = _merge_runs(allpos, allval)
        emax = float(np.max(np.abs(val))) if val.size else 0.0
        noise = 256.0 * _EPS * (fscale + float(np.sum(np.abs(c))))
        if best is None or emax < best[0]:
            best = (emax, c.copy(), pos.copy(), val.copy(), level)
        history.append(emax)
        if emax <= noise:
            converged = True
            break
        if len(pos) < count:
            log.debug("remez: only %d sign runs for %d unknowns", len(pos), count)
            break
        pos, val = _trim(pos, val, count)
        emin = float(np.min(np.abs(val)))
        if emax - emin <= PEAK_RTOL * emax + noise:
            best = (emax, c.copy(), pos.copy(), val.copy(), level)
            converged = True
            break
        if np.array_equal(pos, ref):
            break
        ref = pos

    emax, c, pos, val, level = best
    err = emax
    xs, vs = red.mirrored(pos, val)
    signs = np.sign(vs).astype(int)
    spread = (float(np.max(np.abs(val)) - np.min(np.abs(val))) / emax) if emax > 0 and len(val) else 0.0
    diagnostics = {
        "alternation_points": red.to_x(xs).tolist(),
        "alternation_values": (vs * red.scale()).tolist(),
        "alternation_count": longest_alternation(signs),
        "leveled_error": level * red.scale(),
        "peak_spread": spread,
        "history": history,
    }
    return ApproxResult(
        error=err * red.scale(),
        polynomial=red.polynomial(c),
        p=problem.pnorm,
        degree=problem.degree,
        interval=problem.interval,
        converged=converged,
        discretized=False,
        iterations=it,
        method="remez",
        diagnostics=diagnostics,
    )


def _merge_runs(pos, val):
    """Collapse consecutive same-sign candidates to the largest one."""
    out_p, out_v = [], []
    for p, v in zip(pos, val):
        if v == 0.0:
            continue
        if out_v and np.sign(v) == np.sign(out_v[-1]):
            if abs(v) > abs(out_v[-1]):
                out_p[-1], out_v[-1] = p, v
        else:
            out_p.append(p)
            out_v.append(v)
    return np.array(out_p), np.array(out_v)


LP_TOL = 1e-10


def _discrete_linf(problem: ApproxProblem, red: Reduced) -> ApproxResult:
    """Exact discrete minimax over the sup nodes: min s subject to |r_i| <= s."""
    t = red.sup_nodes()
    fv = red.values(t)
    if np.iscomplexobj(fv):
        if np.any(np.imag(fv) != 0.0):
            raise DomainError("remez_linf needs a real-valued target; use minimax_complex")
        fv = fv.real
    B = red.basis(t)
    N, m = B.shape
    one = np.ones((N, 1))
    A = np.block([[B, -one], [-B, -one]])
    b = np.concatenate([fv, -fv])
    cost = np.zeros(m + 1)
    cost[-1] = 1.0
    res = linprog(
        cost, A_ub=A, b_ub=b, bounds=[(None, None)] * m + [(0.0, None)], method="highs-ds",
        options={"primal_feasibility_tolerance": LP_TOL, "dual_feasibility_tolerance": LP_TOL},
    )
    if res.status == 2:
        raise LPInfeasible("discrete minimax LP infeasible; grid values are corrupt")
    converged = res.status == 0
    c = res.x[:m] if res.x is not None else np.zeros(m)
    r = fv - B @ c
    emax = float(np.max(np.abs(r))) if r.size else 0.0
    # equioscillation readout: nodes where |r| is within solver tolerance of the max
    active = np.abs(r) >= emax - 1e3 * LP_TOL * max(1.0, emax)
    pos, val = _merge_runs(t[active], r[active])
    xs, vs = red.mirrored(pos, val)
    diagnostics = {
        "alternation_points": red.to_x(xs).tolist(),
        "alternation_values": (vs * red.scale()).tolist(),
        "alternation_count": longest_alternation(np.sign(vs).astype(int)),
        "grid_size": int(N),
        "origin_floor": red.grid.origin_floor,
        "lp_status": int(res.status),
    }
    return ApproxResult(
        error=emax * red.scale(),
        polynomial=red.polynomial(c),
        p=problem.pnorm,
        degree=problem.degree,
        interval=problem.interval,
        converged=converged,
        discretized=True,
        iterations=int(getattr(res, "nit", 0) or 0),
        method="minimax-lp",
        diagnostics=diagnostics,
    )

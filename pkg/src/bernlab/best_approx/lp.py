"""General 1 < p < inf by iteratively reweighted least squares."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..functions import FunctionSpec
from ..numerics import weighted_pnorm
from .problem import ApproxProblem, ApproxResult, Reduced

MAX_IRLS_ITERATIONS = 200
CHANGE_RTOL = 1e-10


def _wlsq(B, f, w):
    sw = np.sqrt(w)
    c, *_ = np.linalg.lstsq(B * sw[:, None], f * sw, rcond=None)
    return c


def _irls_weights(w, r, p):
    """w |r|^(p-2), formed in logs relative to a typical residual.

    Singular targets put nodes with |r| ~ 1e60 next to ordinary ones, so
    neither the maximum nor a plain power is a usable scale.
    """
    pos = r[r > 0.0]
    typical = float(np.median(pos))
    rr = np.maximum(r / typical, 1e-12)
    with np.errstate(divide="ignore"):
        logw = np.log(w) + (p - 2.0) * np.log(rr)
    return np.exp(logw - logw.max())


def _objective(B, f, w, c, p):
    return weighted_pnorm(np.abs(f - B @ c), w, p)


def best_lp(problem: ApproxProblem, max_iter: int = MAX_IRLS_ITERATIONS,
            rtol: float = CHANGE_RTOL) -> ApproxResult:
    """IRLS with weights |r|^(p-2) and a damped step.

    The fixed-point step c_ls - c is scaled by 1/(p-1) for p > 2, which for
    real data is exactly Newton's step on sum w |r|^p, then halved until the
    norm decreases. Large p is reached by doubling from 2 so every stage
    starts near its optimum.
    """
    p = problem.pnorm.p
    if not 1.0 < p < math.inf:
        raise DomainError("best_lp needs 1 < p < inf")
    tgt = problem.target
    if isinstance(tgt, FunctionSpec) and tgt.alpha <= -1.0 / p:
        raise DomainError(f"f is not in L_p for alpha = {tgt.alpha} <= -1/p")
    red = Reduced(problem)
    t, w = red.quadrature()
    f = red.values(t)
    f = f.astype(complex) if np.iscomplexobj(f) and np.any(np.imag(f)) else np.real(f).astype(float)
    B = red.basis(t)

    stages = []
    q = 2.0
    if p > 2.0:
        while q * 2.0 < p:
            q *= 2.0
            stages.append(q)
    stages.append(p)

    c = _wlsq(B, f, w)
    it = 0
    converged = False
    err = _objective(B, f, w, c, p)
    history = []
    for stage_p in stages:
        final = stage_p == p
        cur = _objective(B, f, w, c, stage_p)
        stage_converged = False
        while it < max_iter:
            it += 1
            r = np.abs(f - B @ c)
            if not r.max() > 0.0:
                stage_converged = True
                break
            target_c = _wlsq(B, f, _irls_weights(w, r, stage_p))
            step = target_c - c
            lam = 1.0 / (stage_p - 1.0) if stage_p > 2.0 else 1.0
            new = cur
            for _ in range(40):
                trial = c + lam * step
                new = _objective(B, f, w, trial, stage_p)
                if new <= cur:
                    break
                lam *= 0.5
            else:
                trial, new = c, cur
            change = abs(cur - new) / cur if cur > 0 else 0.0
            c, cur = trial, new
            if final:
                history.append(cur)
            if change < (rtol if final else 1e-6):
                stage_converged = True
                break
        if final:
            converged = stage_converged
            err = cur
    return ApproxResult(
        error=err * red.scale(),
        polynomial=red.polynomial(c),
        p=problem.pnorm,
        degree=problem.degree,
        interval=problem.interval,
        converged=converged,
        discretized=False,
        iterations=it,
        method="irls",
        diagnostics={"stages": stages, "nodes": int(len(t)), "history_tail": history[-5:]},
    )

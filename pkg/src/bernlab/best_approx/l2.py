"""Least-squares (p = 2) best approximation by discrete orthogonal projection."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, QuadratureError
from ..functions import FunctionSpec
from .problem import ApproxProblem, ApproxResult, Reduced

PYTHAGORAS_RTOL = 1e-8


def project_l2(problem: ApproxProblem) -> ApproxResult:
    """Orthogonal projection onto polynomials of degree <= n in the quadrature inner product.

    The columns sqrt(w) T_k(t) are orthonormalized by QR, which yields the
    discrete Legendre-type basis for the grid's weights. The error follows
    from Pythagoras, ||f||^2 - sum |<f, q_k>|^2, and is cross-checked against
    the directly integrated residual.
    """
    if problem.pnorm.p != 2.0:
        raise DomainError("project_l2 needs p = 2")
    tgt = problem.target
    if isinstance(tgt, FunctionSpec) and tgt.alpha <= -0.5:
        raise DomainError(f"f is not square integrable for alpha = {tgt.alpha} <= -1/2")
    red = Reduced(problem)
    t, w = red.quadrature()
    f = red.values(t).astype(complex)
    sw = np.sqrt(w)
    A = red.basis(t) * sw[:, None]
    b = f * sw

    Q, R = np.linalg.qr(A)
    proj = Q.T @ b
    norm2 = float(np.vdot(b, b).real)
    if not math.isfinite(norm2):
        raise QuadratureError("norm of the target did not converge")
    pyth2 = norm2 - float(np.vdot(proj, proj).real)
    c = np.linalg.solve(R, proj)
    resid = b - A @ c
    direct2 = float(np.vdot(resid, resid).real)
    # cancellation floor for the Pythagoras form
    floor = 64.0 * np.finfo(float).eps * norm2
    pyth = math.sqrt(max(pyth2, 0.0))
    direct = math.sqrt(direct2)
    if pyth2 <= floor:
        err = direct
    else:
        err = pyth
    scale = red.scale()
    agree = abs(pyth - direct) <= PYTHAGORAS_RTOL * max(direct, 1e-300) or pyth2 <= floor
    return ApproxResult(
        error=err * scale,
        polynomial=red.polynomial(c),
        p=problem.pnorm,
        degree=problem.degree,
        interval=problem.interval,
        converged=bool(agree),
        discretized=False,
        iterations=1,
        method="l2-projection",
        diagnostics={
            "pythagoras_error": pyth * scale,
            "direct_error": direct * scale,
            "target_norm": math.sqrt(norm2) * scale,
            "orthonormal_coefficients": np.abs(proj).tolist(),
            "nodes": int(len(t)),
        },
    )

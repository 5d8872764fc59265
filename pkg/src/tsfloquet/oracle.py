"""Brute-force monodromy matrix, independent of the series code.

Propagates the 2x2 identity across one period of the first-order system
Y' = S(t) Y with S = [[0, 1], [-q, -p]]: an adaptive Runge-Kutta
integration over each dense interval and the exact one-step product
Y <- (I + mu S) Y at each scattered point. Shares nothing with the series
path except expression evaluation, so agreement of trace and determinant
with a_partial and compute_B is a genuine cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import CheckFailed, StepSizeUnderflow
from .floquet import SystemSpec, a_partial, compute_B, error_bound, solve_phi
from .timescale import Interval, Point


def _S(spec: SystemSpec, t: float) -> np.ndarray:
    return np.array([[0.0, 1.0], [-spec.q_at(t), -spec.p_at(t)]])


def monodromy(spec: SystemSpec, rk_tol: float = 1e-10) -> np.ndarray:
    """Phi_S(t0+T, t0) as a 2x2 array."""
    ts = spec.ts
    Y = np.eye(2)
    scattered = dict(ts.scattered_with_mu())
    for i, seg in enumerate(ts.segments):
        if isinstance(seg, Interval):
            a, b = seg.a, seg.b
            eps = (b - a) * 1e-9

            def rhs(t, y):
                # clamp inward: coefficient values on a dense part are
                # one-sided limits at the segment boundary
                tc = min(max(t, a + eps), b - eps)
                return (_S(spec, tc) @ y.reshape(2, 2)).ravel()

            sol = solve_ivp(rhs, (a, b), Y.ravel(), method="RK45",
                            rtol=rk_tol, atol=rk_tol)
            if not sol.success:
                raise StepSizeUnderflow(
                    f"integration failed on [{a}, {b}]: {sol.message}"
                )
            Y = sol.y[:, -1].reshape(2, 2)
        end = seg.x if isinstance(seg, Point) else seg.b
        if i < len(ts.segments) - 1:
            mu = scattered[end]
            Y = (np.eye(2) + mu * _S(spec, end)) @ Y
    return Y


@dataclass(frozen=True)
class CheckResult:
    a_oracle: float
    b_oracle: float
    a_delta: float  # |A_oracle - A(n)|
    b_delta: float  # |B_oracle - B|
    allowed: float  # error_bound(n) + tol


def cross_check(spec: SystemSpec, n: int, tol: float = 1e-8,
                rk_tol: float = 1e-10) -> CheckResult:
    """Compare the series A(n), B against the monodromy trace and det.

    The A comparison allows the truncation bound plus tol; B is exact up
    to quadrature, so only tol is allowed.
    """
    Y = monodromy(spec, rk_tol)
    a_oracle = float(np.trace(Y))
    b_oracle = float(np.linalg.det(Y))
    table = solve_phi(spec)
    a_n = a_partial(spec, table, n)
    b = compute_B(spec)
    allowed = error_bound(spec, table, n).value + tol
    result = CheckResult(
        a_oracle=a_oracle,
        b_oracle=b_oracle,
        a_delta=abs(a_oracle - a_n),
        b_delta=abs(b_oracle - b),
        allowed=allowed,
    )
    if result.a_delta > allowed or result.b_delta > tol:
        raise CheckFailed(
            f"oracle disagreement: |A_oracle - A({n})| = {result.a_delta} "
            f"(allowed {allowed}), |B_oracle - B| = {result.b_delta} "
            f"(allowed {tol})",
            a_delta=result.a_delta,
            b_delta=result.b_delta,
        )
    return result

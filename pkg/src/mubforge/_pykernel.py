"""Pure numpy implementation of the residual/Jacobian and LM kernels.

Used when the compiled ``_core`` extension is unavailable, and as the
reference the compiled kernel is tested against.  Both expose the same
functions with the same argument order.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

GUARD = 1e-12

GRADIENT_SMALL = 0
STEP_SMALL = 1
MAX_ITER = 2


def _amplitudes(angles, d, nvec):
    ph = np.zeros((nvec, d))
    if nvec > 1:
        ph[1:, 1:] = np.asarray(angles, dtype=np.float64).reshape(nvec - 1, d - 1)
    return np.exp(1j * ph) / np.sqrt(d)


def residuals(angles, d, nvec, pu, pw, target, squared):
    amps = _amplitudes(angles, d, nvec)
    z = (amps[pu].conj() * amps[pw]).sum(axis=1)
    a = np.abs(z)
    if squared:
        return a * a - target * target
    return a - target


def residuals_jacobian(angles, d, nvec, pu, pw, target, squared):
    amps = _amplitudes(angles, d, nvec)
    t = amps[pu].conj() * amps[pw]
    z = t.sum(axis=1)
    a = np.abs(z)
    # d|z|/d(phase of w at k) = -Im(conj(z) t_k) / |z|; opposite sign for u
    g = -np.imag(np.conj(z)[:, None] * t[:, 1:])
    if squared:
        r = a * a - target * target
        g *= 2.0
    else:
        r = a - target
        safe = a >= GUARD
        g[safe] /= a[safe, None]
        g[~safe] = 0.0
    c = len(pu)
    m = d - 1
    J = np.zeros((c, m * (nvec - 1)))
    rows = np.arange(c)[:, None]
    k = np.arange(m)
    wcols = (pw[:, None] - 1) * m + k
    J[rows, wcols] = g
    has_u = pu > 0
    ucols = (pu[has_u, None] - 1) * m + k
    J[rows[has_u], ucols] = -g[has_u]
    return r, J


def lm_minimize(angles0, d, nvec, pu, pw, target, squared, max_iter, lam0, up, down,
                gtol, xtol, lam_max, keep_trace):
    x = np.array(angles0, dtype=np.float64)
    r, J = residuals_jacobian(x, d, nvec, pu, pw, target, squared)
    F = float(r @ r)
    trace = [F] if keep_trace else None
    lam = lam0
    code = MAX_ITER
    it = 0
    if x.size == 0:
        return x, F, 0, GRADIENT_SMALL, np.array(trace or [])
    while it < max_iter:
        g = J.T @ r
        if np.max(np.abs(g)) < gtol:
            code = GRADIENT_SMALL
            break
        A = J.T @ J
        diag = np.diag(A).copy()
        floor = max(1e-9 * float(diag.max()), 1e-300)
        diag = np.maximum(diag, floor)
        accepted = False
        while lam <= lam_max:
            M = A + np.diag(lam * diag)
            try:
                cf = scipy.linalg.cho_factor(M, lower=True, check_finite=False)
            except np.linalg.LinAlgError:
                lam *= up
                continue
            delta = scipy.linalg.cho_solve(cf, -g, check_finite=False)
            if not np.all(np.isfinite(delta)):
                lam *= up
                continue
            if np.max(np.abs(delta)) < xtol:
                break
            xn = x + delta
            rn = residuals(xn, d, nvec, pu, pw, target, squared)
            Fn = float(rn @ rn)
            if Fn < F:
                x, F = xn, Fn
                lam = max(lam * down, 1e-300)
                accepted = True
                break
            lam *= up
        if not accepted:
            code = STEP_SMALL
            break
        it += 1
        r, J = residuals_jacobian(x, d, nvec, pu, pw, target, squared)
        if keep_trace:
            trace.append(F)
    return x, F, it, code, np.array(trace if keep_trace else [])

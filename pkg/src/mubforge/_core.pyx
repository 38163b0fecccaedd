# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled residual/Jacobian and Levenberg-Marquardt kernels.

Same functions and argument order as ``_pykernel``.  Each residual row of the
Jacobian touches at most two blocks of ``d - 1`` angles, so ``J^T J`` is
accumulated block-wise instead of through a dense product.
"""

import numpy as np

from libc.math cimport sin, cos, sqrt, fabs

cdef double GUARD = 1e-12

DEF GRADIENT_SMALL = 0
DEF STEP_SMALL = 1
DEF MAX_ITER = 2


cdef void _amps(const double[::1] x, int d, int nvec,
                double[:, ::1] ar, double[:, ::1] ai) noexcept nogil:
    cdef double s = 1.0 / sqrt(<double>d)
    cdef int v, k
    cdef double th
    for v in range(nvec):
        ar[v, 0] = s
        ai[v, 0] = 0.0
        for k in range(1, d):
            if v == 0:
                ar[v, k] = s
                ai[v, k] = 0.0
            else:
                th = x[(v - 1) * (d - 1) + k - 1]
                ar[v, k] = s * cos(th)
                ai[v, k] = s * sin(th)


cdef double _residuals(const double[::1] x, int d, int nvec,
                       const long[::1] pu, const long[::1] pw, const double[::1] target,
                       bint squared, double[:, ::1] ar, double[:, ::1] ai,
                       double[::1] r, double[:, ::1] G, bint want_grad) noexcept nogil:
    """Fill r (and the per-pair gradient blocks G); return sum r^2."""
    cdef int c = pu.shape[0]
    cdef int i, k, u, w
    cdef double zr, zi, tr, ti, a, gk, F = 0.0
    _amps(x, d, nvec, ar, ai)
    for i in range(c):
        u = pu[i]
        w = pw[i]
        zr = 0.0
        zi = 0.0
        for k in range(d):
            zr += ar[u, k] * ar[w, k] + ai[u, k] * ai[w, k]
            zi += ar[u, k] * ai[w, k] - ai[u, k] * ar[w, k]
        a = sqrt(zr * zr + zi * zi)
        if squared:
            r[i] = a * a - target[i] * target[i]
        else:
            r[i] = a - target[i]
        F += r[i] * r[i]
        if want_grad:
            for k in range(1, d):
                tr = ar[u, k] * ar[w, k] + ai[u, k] * ai[w, k]
                ti = ar[u, k] * ai[w, k] - ai[u, k] * ar[w, k]
                gk = -(zr * ti - zi * tr)
                if squared:
                    gk = 2.0 * gk
                elif a >= GUARD:
                    gk = gk / a
                else:
                    gk = 0.0
                G[i, k - 1] = gk
    return F


cdef void _normal_equations(int d, const long[::1] pu, const long[::1] pw,
                            const double[::1] r, const double[:, ::1] G,
                            double[:, ::1] A, double[::1] g) noexcept nogil:
    cdef int c = pu.shape[0]
    cdef int m = d - 1
    cdef int p = A.shape[0]
    cdef int i, k, l, bu, bw
    cdef double gk, gkl
    for k in range(p):
        g[k] = 0.0
        for l in range(p):
            A[k, l] = 0.0
    for i in range(c):
        bw = (pw[i] - 1) * m
        bu = (pu[i] - 1) * m if pu[i] > 0 else -1
        for k in range(m):
            gk = G[i, k]
            g[bw + k] += gk * r[i]
            if bu >= 0:
                g[bu + k] -= gk * r[i]
            for l in range(m):
                gkl = gk * G[i, l]
                A[bw + k, bw + l] += gkl
                if bu >= 0:
                    A[bu + k, bu + l] += gkl
                    A[bu + k, bw + l] -= gkl
                    A[bw + k, bu + l] -= gkl


cdef bint _cholesky_solve(double[:, ::1] L, double[::1] b, double[::1] out) noexcept nogil:
    """Factor L in place (lower triangle) and solve L L^T out = b."""
    cdef int n = L.shape[0]
    cdef int i, j, k
    cdef double acc
    for j in range(n):
        acc = L[j, j]
        for k in range(j):
            acc -= L[j, k] * L[j, k]
        if not (acc > 0.0):
            return False
        L[j, j] = sqrt(acc)
        for i in range(j + 1, n):
            acc = L[i, j]
            for k in range(j):
                acc -= L[i, k] * L[j, k]
            L[i, j] = acc / L[j, j]
    for i in range(n):
        acc = b[i]
        for k in range(i):
            acc -= L[i, k] * out[k]
        out[i] = acc / L[i, i]
    for i in range(n - 1, -1, -1):
        acc = out[i]
        for k in range(i + 1, n):
            acc -= L[k, i] * out[k]
        out[i] = acc / L[i, i]
    for i in range(n):
        if out[i] != out[i] or fabs(out[i]) > 1e300:
            return False
    return True


def residuals(angles, int d, int nvec, pu, pw, target, bint squared):
    cdef const double[::1] x = np.ascontiguousarray(angles, dtype=np.float64)
    cdef const long[::1] u = np.ascontiguousarray(pu, dtype=np.int64)
    cdef const long[::1] w = np.ascontiguousarray(pw, dtype=np.int64)
    cdef const double[::1] t = np.ascontiguousarray(target, dtype=np.float64)
    ar = np.empty((nvec, d))
    ai = np.empty((nvec, d))
    r = np.empty(u.shape[0])
    G = np.empty((1, d - 1))
    _residuals(x, d, nvec, u, w, t, squared, ar, ai, r, G, False)
    return r


def residuals_jacobian(angles, int d, int nvec, pu, pw, target, bint squared):
    cdef const double[::1] x = np.ascontiguousarray(angles, dtype=np.float64)
    cdef const long[::1] u = np.ascontiguousarray(pu, dtype=np.int64)
    cdef const long[::1] w = np.ascontiguousarray(pw, dtype=np.int64)
    cdef const double[::1] t = np.ascontiguousarray(target, dtype=np.float64)
    cdef int c = u.shape[0]
    cdef int m = d - 1
    cdef int i, k
    ar = np.empty((nvec, d))
    ai = np.empty((nvec, d))
    r = np.empty(c)
    Garr = np.empty((c, m))
    _residuals(x, d, nvec, u, w, t, squared, ar, ai, r, Garr, True)
    J = np.zeros((c, m * max(nvec - 1, 0)))
    cdef double[:, ::1] Jv = J
    cdef double[:, ::1] G = Garr
    for i in range(c):
        for k in range(m):
            Jv[i, (w[i] - 1) * m + k] = G[i, k]
            if u[i] > 0:
                Jv[i, (u[i] - 1) * m + k] = -G[i, k]
    return r, J


def lm_minimize(angles0, int d, int nvec, pu, pw, target, bint squared, int max_iter,
                double lam0, double up, double down, double gtol, double xtol,
                double lam_max, bint keep_trace):
    xarr = np.array(angles0, dtype=np.float64)
    cdef double[::1] x = xarr
    cdef const long[::1] u = np.ascontiguousarray(pu, dtype=np.int64)
    cdef const long[::1] w = np.ascontiguousarray(pw, dtype=np.int64)
    cdef const double[::1] t = np.ascontiguousarray(target, dtype=np.float64)
    cdef int c = u.shape[0]
    cdef int m = d - 1
    cdef int p = x.shape[0]
    cdef double[:, ::1] ar = np.empty((nvec, d))
    cdef double[:, ::1] ai = np.empty((nvec, d))
    cdef double[::1] r = np.empty(c)
    cdef double[::1] rn = np.empty(c)
    cdef double[:, ::1] G = np.empty((max(c, 1), m))
    cdef double[:, ::1] A = np.empty((p, p))
    cdef double[:, ::1] L = np.empty((p, p))
    cdef double[::1] g = np.empty(p)
    cdef double[::1] diag = np.empty(p)
    cdef double[::1] delta = np.empty(p)
    cdef double[::1] xn = np.empty(p)
    cdef double[::1] ng = np.empty(p)
    trace_arr = np.empty(max_iter + 1 if keep_trace else 0)
    cdef double[::1] trace = trace_arr
    cdef double F, Fn, lam = lam0, gmax, dmax, dmx, floor
    cdef int it = 0, code = MAX_ITER, k, l
    cdef bint accepted

    with nogil:
        F = _residuals(x, d, nvec, u, w, t, squared, ar, ai, r, G, True)
        if keep_trace:
            trace[0] = F
        if p == 0:
            code = GRADIENT_SMALL
        while p > 0 and it < max_iter:
            _normal_equations(d, u, w, r, G, A, g)
            gmax = 0.0
            dmx = 0.0
            for k in range(p):
                if fabs(g[k]) > gmax:
                    gmax = fabs(g[k])
                if A[k, k] > dmx:
                    dmx = A[k, k]
            if gmax < gtol:
                code = GRADIENT_SMALL
                break
            floor = 1e-9 * dmx
            if floor < 1e-300:
                floor = 1e-300
            for k in range(p):
                diag[k] = A[k, k] if A[k, k] > floor else floor
                ng[k] = -g[k]
            accepted = False
            while lam <= lam_max:
                for k in range(p):
                    for l in range(k + 1):
                        L[k, l] = A[k, l]
                    L[k, k] += lam * diag[k]
                if not _cholesky_solve(L, ng, delta):
                    lam *= up
                    continue
                dmax = 0.0
                for k in range(p):
                    if fabs(delta[k]) > dmax:
                        dmax = fabs(delta[k])
                if dmax < xtol:
                    break
                for k in range(p):
                    xn[k] = x[k] + delta[k]
                Fn = _residuals(xn, d, nvec, u, w, t, squared, ar, ai, rn, G, False)
                if Fn < F:
                    for k in range(p):
                        x[k] = xn[k]
                    F = Fn
                    lam *= down
                    if lam < 1e-300:
                        lam = 1e-300
                    accepted = True
                    break
                lam *= up
            if not accepted:
                code = STEP_SMALL
                break
            it += 1
            _residuals(x, d, nvec, u, w, t, squared, ar, ai, r, G, True)
            if keep_trace:
                trace[it] = F
    return xarr, F, it, code, trace_arr[: it + 1] if keep_trace else trace_arr

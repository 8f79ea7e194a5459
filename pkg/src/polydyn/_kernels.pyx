# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels.

Same API as :mod:`polydyn._fallback`. The O(d^2) Aberth sweeps release the
GIL and can run the per-root updates across OpenMP threads.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport fabs, sqrt, log, pow, cos, sin, INFINITY, isfinite, M_PI as PI
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef double EPS = np.finfo(float).eps

ESCAPED = 0
BOUNDED = 1
CYCLE = 2


cdef inline double cabs_(double complex z) noexcept nogil:
    cdef double x = fabs(z.real)
    cdef double y = fabs(z.imag)
    cdef double t
    if x < y:
        t = x
        x = y
        y = t
    if x == 0.0:
        return 0.0
    t = y / x
    return x * sqrt(1.0 + t * t)


cdef inline void horner3(const double complex[::1] a, int d, double complex z,
                         double complex *p, double complex *dp, double *s) noexcept nogil:
    cdef double complex pp = a[0]
    cdef double complex dd = 0
    cdef double ss = cabs_(a[0])
    cdef double az = cabs_(z)
    cdef int i
    for i in range(1, d + 1):
        dd = dd * z + pp
        pp = pp * z + a[i]
        ss = ss * az + cabs_(a[i])
    p[0] = pp
    dp[0] = dd
    s[0] = ss


cdef inline void horner3_rev(const double complex[::1] a, int d, double complex w,
                             double complex *p, double complex *dp, double *s) noexcept nogil:
    cdef double complex pp = a[d]
    cdef double complex dd = 0
    cdef double ss = cabs_(a[d])
    cdef double aw = cabs_(w)
    cdef int i
    for i in range(d - 1, -1, -1):
        dd = dd * w + pp
        pp = pp * w + a[i]
        ss = ss * aw + cabs_(a[i])
    p[0] = pp
    dp[0] = dd
    s[0] = ss


cdef inline void logderiv_coeffs(const double complex[::1] a, int d, double anorm,
                                 double complex z, double complex *g, double *res) noexcept nogil:
    cdef double complex p, dp, w
    cdef double s
    if cabs_(z) <= 1.0:
        horner3(a, d, z, &p, &dp, &s)
        res[0] = cabs_(p) / (s + anorm)
        if p == 0:
            g[0] = INFINITY
        else:
            g[0] = dp / p
    else:
        w = 1.0 / z
        horner3_rev(a, d, w, &p, &dp, &s)
        res[0] = cabs_(p) / (s + anorm * pow(cabs_(w), <double>d))
        if p == 0:
            g[0] = INFINITY
        else:
            g[0] = w * (d - w * dp / p)


cdef inline void logderiv_iterated(const double complex[::1] a, int d, double anorm, int n,
                                   double big, double complex z, double complex *g, double *res) noexcept nogil:
    cdef double complex zk = z
    cdef double complex dz = 1.0
    cdef double c = cabs_(z)
    cdef double complex fz, dfz, p
    cdef double s
    cdef int k
    for k in range(n):
        if cabs_(zk) > big:
            g[0] = (dz / zk) * pow(<double>d, <double>(n - k))
            res[0] = INFINITY
            return
        horner3(a, d, zk, &fz, &dfz, &s)
        dz = dfz * dz
        c = cabs_(dfz) * c + s
        zk = fz
    p = zk - z
    res[0] = cabs_(p) / (c + cabs_(z) + anorm)
    if p == 0:
        g[0] = INFINITY
    else:
        g[0] = (dz - 1.0) / p


cdef double _anorm(const double complex[::1] a):
    cdef double m = 0.0
    cdef Py_ssize_t i
    for i in range(a.shape[0]):
        if cabs_(a[i]) > m:
            m = cabs_(a[i])
    return m


cdef tuple _aberth(int mode, const double complex[::1] a, int n, double big,
                   z0, int maxiter, double res_tol, int nthreads):
    cdef int d = a.shape[0] - 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zarr = np.array(z0, dtype=np.complex128, copy=True)
    cdef double complex[::1] z = zarr
    cdef int m = z.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] resarr = np.full(m, np.inf)
    cdef double[::1] res = resarr
    cdef double complex[::1] w = np.zeros(m, dtype=np.complex128)
    cdef char[::1] done = np.zeros(m, dtype=np.int8)
    cdef char[::1] upd = np.zeros(m, dtype=np.int8)
    cdef int it = 0, i, j, remaining
    cdef double complex g, s, denom
    cdef double r
    cdef double anorm = _anorm(a)
    if nthreads < 1:
        nthreads = 1
    for it in range(1, maxiter + 1):
        for i in prange(m, nogil=True, num_threads=nthreads, schedule="static"):
            upd[i] = 0
            if done[i]:
                continue
            if mode == 0:
                logderiv_coeffs(a, d, anorm, z[i], &g, &r)
            else:
                logderiv_iterated(a, d, anorm, n, big, z[i], &g, &r)
            res[i] = r
            if r <= res_tol or not (isfinite(g.real) and isfinite(g.imag)):
                done[i] = 1
                continue
            s = 0
            for j in range(m):
                if j != i:
                    s = s + 1.0 / (z[i] - z[j])
            denom = g - s
            if denom == 0:
                denom = EPS
            w[i] = 1.0 / denom
            upd[i] = 1
        remaining = 0
        with nogil:
            for i in range(m):
                if upd[i]:
                    z[i] = z[i] - w[i]
                    if cabs_(w[i]) <= EPS * cabs_(z[i]):
                        done[i] = 1
                if not done[i]:
                    remaining += 1
        if remaining == 0:
            break
    cdef cnp.ndarray[cnp.float64_t, ndim=1] steparr = np.empty(m)
    cdef double[::1] stepv = steparr
    with nogil:
        for i in range(m):
            if mode == 0:
                logderiv_coeffs(a, d, anorm, z[i], &g, &r)
            else:
                logderiv_iterated(a, d, anorm, n, big, z[i], &g, &r)
            res[i] = r
            if isfinite(g.real) and isfinite(g.imag) and g != 0:
                stepv[i] = 1.0 / cabs_(g)
            else:
                stepv[i] = INFINITY if (g.real != g.real or g.imag != g.imag) else 0.0
    return zarr, resarr, it, steparr


def aberth_coeffs(a, z0, int maxiter, int nthreads=1):
    """Jacobi Aberth-Ehrlich iteration on an explicit coefficient vector.

    Returns ``(roots, relative_residuals, iterations, newton_steps)``.
    """
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef int d = av.shape[0] - 1
    return _aberth(0, av, 0, 0.0, z0, maxiter, 4.0 * d * EPS, nthreads)


def aberth_iterated(a, int n, z0, int maxiter, double big, int nthreads=1):
    """Aberth-Ehrlich on the implicit polynomial ``f^n(z) - z``."""
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef int d = av.shape[0] - 1
    return _aberth(1, av, n, big, z0, maxiter, 4.0 * (n + 1) * d * EPS, nthreads)


def newton_polish_coeffs(a, z):
    """One guarded Newton step per root; keeps the step only if the residual drops."""
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef int d = av.shape[0] - 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zout = np.array(z, dtype=np.complex128, copy=True)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rout = np.empty(zout.shape[0])
    cdef double complex[::1] zv = zout
    cdef double[::1] rv = rout
    cdef double complex g, g2, cand
    cdef double r, r2
    cdef int i
    cdef double anorm = _anorm(av)
    with nogil:
        for i in range(zv.shape[0]):
            logderiv_coeffs(av, d, anorm, zv[i], &g, &r)
            rv[i] = r
            if isfinite(g.real) and isfinite(g.imag) and g != 0:
                cand = zv[i] - 1.0 / g
                logderiv_coeffs(av, d, anorm, cand, &g2, &r2)
                if r2 < r:
                    zv[i] = cand
                    rv[i] = r2
    return zout, rout


def escape_orbit(a, double complex z0, double radius, long budget, double cycle_tol, int max_period):
    """Iterate until ``|z| > radius``, a numerical cycle, or the budget runs out.

    Returns ``(status, step, z)``; see :func:`polydyn._fallback.escape_orbit`.
    """
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef int d = av.shape[0] - 1
    cdef double complex z = z0
    cdef double complex acc
    cdef double az, thr
    cdef long k
    cdef int i, h = 0, filled = 0, status = 1
    if max_period < 1:
        max_period = 1
    cdef double complex *hist = <double complex *> malloc(max_period * sizeof(double complex))
    if cabs_(z) > radius:
        free(hist)
        return ESCAPED, 0, z
    hist[0] = z
    filled = 1
    h = 1 % max_period
    k = budget
    with nogil:
        for k in range(1, budget + 1):
            acc = av[0]
            for i in range(1, d + 1):
                acc = acc * z + av[i]
            z = acc
            az = cabs_(z)
            if az > radius or az != az:
                status = 0
                break
            thr = cycle_tol * (1.0 + az)
            for i in range(filled):
                if cabs_(z - hist[i]) <= thr:
                    status = 2
                    break
            if status == 2:
                break
            hist[h] = z
            h = (h + 1) % max_period
            if filled < max_period:
                filled += 1
    free(hist)
    if status == 1:
        k = budget
    return status, k, z


cdef void solve_preimages(const double complex[::1] a, int d, double complex w,
                          double complex *z, double complex *coef, double complex *stp,
                          int maxiter) noexcept nogil:
    """All roots of f(z) = w into z[0..d-1]; coef and stp are scratch buffers."""
    cdef int i, j, it, moving
    cdef double complex center, fc, p, dp, sm
    cdef double ss, rad, res, az, ang
    cdef double tol = 4.0 * d * EPS
    for i in range(d + 1):
        coef[i] = a[i]
    coef[d] = coef[d] - w
    center = -a[1] / (d * a[0])
    fc = a[0]
    for i in range(1, d + 1):
        fc = fc * center + a[i]
    rad = pow(cabs_((w - fc) / a[0]), 1.0 / d) + 1e-3
    for i in range(d):
        ang = 2.0 * PI * i / d + 0.4
        z[i] = center + rad * (cos(ang) + 1j * sin(ang))
    for it in range(maxiter):
        moving = 0
        for i in range(d):
            p = coef[0]
            dp = 0
            ss = cabs_(coef[0])
            az = cabs_(z[i])
            for j in range(1, d + 1):
                dp = dp * z[i] + p
                p = p * z[i] + coef[j]
                ss = ss * az + cabs_(coef[j])
            res = cabs_(p) / ss
            stp[i] = 0
            if res <= tol or p == 0:
                continue
            sm = 0
            for j in range(d):
                if j != i:
                    sm = sm + 1.0 / (z[i] - z[j])
            sm = dp / p - sm
            if sm == 0:
                continue
            stp[i] = 1.0 / sm
            moving = 1
        if not moving:
            break
        for i in range(d):
            z[i] = z[i] - stp[i]


def preimages_batch(a, targets):
    """All d roots of ``f(z) = w`` for each target ``w``; shape ``(len(targets), d)``."""
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef int d = av.shape[0] - 1
    cdef const double complex[::1] tv = np.ascontiguousarray(targets, dtype=np.complex128)
    cdef Py_ssize_t B = tv.shape[0], b
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((B, d), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    cdef double complex *coef = <double complex *> malloc((d + 1) * sizeof(double complex))
    cdef double complex *stp = <double complex *> malloc(d * sizeof(double complex))
    with nogil:
        for b in range(B):
            solve_preimages(av, d, tv[b], &ov[b, 0], coef, stp, 100)
    free(coef)
    free(stp)
    return out


def backward_orbits(a, starts, choices):
    """Random backward orbits, one per row of ``choices``.

    At step t chain b moves to preimage number ``choices[b, t]`` of its
    current point. Returns ``log|f'(z)|`` at every visited point.
    """
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef int d = av.shape[0] - 1
    cdef const long[:, ::1] ch = np.ascontiguousarray(choices, dtype=np.int64)
    cdef const double complex[::1] st = np.ascontiguousarray(starts, dtype=np.complex128)
    cdef Py_ssize_t B = ch.shape[0], T = ch.shape[1], b, t
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((B, T))
    cdef double[:, ::1] ov = out
    cdef double complex *z = <double complex *> malloc(d * sizeof(double complex))
    cdef double complex *coef = <double complex *> malloc((d + 1) * sizeof(double complex))
    cdef double complex *stp = <double complex *> malloc(d * sizeof(double complex))
    cdef double complex cur, dv
    cdef int j
    with nogil:
        for b in range(B):
            cur = st[b]
            for t in range(T):
                solve_preimages(av, d, cur, z, coef, stp, 60)
                cur = z[ch[b, t]]
                dv = d * av[0]
                for j in range(1, d):
                    dv = dv * cur + (d - j) * av[j]
                ov[b, t] = log(cabs_(dv))
    free(z)
    free(coef)
    free(stp)
    return out


def backend_name():
    return "cython"

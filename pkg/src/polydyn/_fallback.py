"""Pure Python / numpy implementations of the hot kernels.

Signatures and semantics match the compiled ``_kernels`` module exactly; the
package picks one of the two at import time (see :mod:`polydyn._core`).
Array work is vectorised with numpy; the scalar orbit loops are plain Python.
"""


import numpy as np

EPS = np.finfo(float).eps

ESCAPED = 0
BOUNDED = 1
CYCLE = 2

# columns processed per block in the O(d^2) Aberth sum, bounds peak memory
_BLOCK = 512


def _horner_all(a, z):
    """Return p(z), p'(z) and sum |a_i||z|^i for an array of points."""
    p = np.full(z.shape, a[0], dtype=np.complex128)
    dp = np.zeros(z.shape, dtype=np.complex128)
    az = np.abs(z)
    s = np.full(z.shape, abs(a[0]))
    for c in a[1:]:
        dp = dp * z + p
        p = p * z + c
        s = s * az + abs(c)
    return p, dp, s


def _logderiv_coeffs(a, z):
    """Log-derivative p'/p and relative residual, switching to 1/z outside the unit disk.

    The residual is ``|p(z)| / (sum |a_i||z|^i + max |a_i|)``; the extra
    norm term keeps it meaningful at a root in 0 when ``a_0 = 0``.
    """
    d = a.shape[0] - 1
    anorm = np.abs(a).max()
    g = np.empty(z.shape, dtype=np.complex128)
    res = np.empty(z.shape)
    inner = np.abs(z) <= 1.0
    if inner.any():
        p, dp, s = _horner_all(a, z[inner])
        with np.errstate(divide="ignore", invalid="ignore"):
            g[inner] = dp / p
        res[inner] = np.abs(p) / (s + anorm)
    outer = ~inner
    if outer.any():
        w = 1.0 / z[outer]
        r, dr, s = _horner_all(a[::-1], w)
        with np.errstate(divide="ignore", invalid="ignore"):
            g[outer] = w * (d - w * dr / r)
        res[outer] = np.abs(r) / (s + anorm * np.abs(w) ** d)
    return g, res


def _logderiv_iterated(a, n, z, big):
    """Log-derivative of f^n(z) - z and relative residual."""
    d = a.shape[0] - 1
    zk = z.copy()
    dz = np.ones(z.shape, dtype=np.complex128)
    c = np.abs(z)
    esc_step = np.full(z.shape, -1, dtype=np.int64)
    esc_ratio = np.zeros(z.shape, dtype=np.complex128)
    for k in range(n):
        live = esc_step < 0
        blow = live & (np.abs(zk) > big)
        if blow.any():
            esc_step[blow] = k
            esc_ratio[blow] = dz[blow] / zk[blow]
            live &= ~blow
        if not live.any():
            break
        fz, dfz, s = _horner_all(a, zk[live])
        dz[live] = dfz * dz[live]
        c[live] = np.abs(dfz) * c[live] + s
        zk[live] = fz
    g = np.empty(z.shape, dtype=np.complex128)
    res = np.full(z.shape, np.inf)
    live = esc_step < 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        p = zk[live] - z[live]
        g[live] = (dz[live] - 1.0) / p
        res[live] = np.abs(p) / (c[live] + np.abs(z[live]) + np.abs(a).max())
    gone = ~live
    if gone.any():
        g[gone] = esc_ratio[gone] * np.power(float(d), n - esc_step[gone])
    return g, res


def _aberth_sum(z, active):
    """sum_{j != i} 1/(z_i - z_j) for active i."""
    idx = np.flatnonzero(active)
    out = np.zeros(idx.shape, dtype=np.complex128)
    for start in range(0, idx.size, _BLOCK):
        rows = idx[start : start + _BLOCK]
        diff = z[rows, None] - z[None, :]
        diff[np.arange(rows.size), rows] = 1.0
        inv = 1.0 / diff
        inv[np.arange(rows.size), rows] = 0.0
        out[start : start + rows.size] = inv.sum(axis=1)
    return out


def _aberth(logderiv, z0, maxiter, res_tol):
    z = np.array(z0, dtype=np.complex128, copy=True)
    done = np.zeros(z.shape, dtype=bool)
    res = np.full(z.shape, np.inf)
    it = 0
    for it in range(1, maxiter + 1):
        active = ~done
        g, r = logderiv(z[active])
        res[active] = r
        conv = (r <= res_tol) | ~np.isfinite(g)
        # p == 0 exactly gives an infinite log-derivative: that root is exact
        act_idx = np.flatnonzero(active)
        done[act_idx[conv]] = True
        active = ~done
        if not active.any():
            break
        keep = ~conv
        s = _aberth_sum(z, active)
        denom = g[keep] - s
        denom[denom == 0] = EPS
        w = 1.0 / denom
        idx = act_idx[keep]
        z[idx] -= w
        small = np.abs(w) <= EPS * np.abs(z[idx])
        done[idx[small]] = True
    g, r = logderiv(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = np.where(np.isfinite(g), 1.0 / np.abs(g), 0.0)
    step[np.isnan(g)] = np.inf
    return z, r, it, step


def aberth_coeffs(a, z0, maxiter, nthreads=1):
    """Jacobi Aberth-Ehrlich iteration on an explicit coefficient vector.

    Returns ``(roots, relative_residuals, iterations, newton_steps)``.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    d = a.shape[0] - 1
    return _aberth(lambda z: _logderiv_coeffs(a, z), z0, maxiter, 4.0 * d * EPS)


def aberth_iterated(a, n, z0, maxiter, big, nthreads=1):
    """Aberth-Ehrlich on the implicit polynomial ``f^n(z) - z``.

    ``f^n`` is never expanded; values and derivatives come from the orbit.
    Points whose orbit exceeds ``big`` use the asymptotic Newton ratio.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    d = a.shape[0] - 1
    return _aberth(
        lambda z: _logderiv_iterated(a, n, z, big), z0, maxiter, 4.0 * (n + 1) * d * EPS
    )


def newton_polish_coeffs(a, z):
    """One guarded Newton step per root; keeps the step only if the residual drops."""
    a = np.ascontiguousarray(a, dtype=np.complex128)
    g, r = _logderiv_coeffs(a, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        cand = z - 1.0 / g
    ok = np.isfinite(cand)
    g2, r2 = _logderiv_coeffs(a, np.where(ok, cand, z))
    better = ok & (r2 < r)
    return np.where(better, cand, z), np.where(better, r2, r)


def escape_orbit(a, z0, radius, budget, cycle_tol, max_period):
    """Iterate until ``|z| > radius``, a numerical cycle, or the budget runs out.

    Returns ``(status, step, z)``: status ``ESCAPED`` with the first index
    whose modulus exceeds ``radius``; ``CYCLE`` when the orbit returns to
    within ``cycle_tol * (1 + |z|)`` of one of its last ``max_period``
    points; ``BOUNDED`` when the budget is exhausted.
    """
    coeffs = [complex(c) for c in a]
    z = complex(z0)
    if abs(z) > radius:
        return ESCAPED, 0, z
    hist = [z]
    for k in range(1, budget + 1):
        acc = coeffs[0]
        for c in coeffs[1:]:
            acc = acc * z + c
        z = acc
        az = abs(z)
        if az > radius or az != az:
            return ESCAPED, k, z
        thr = cycle_tol * (1.0 + az)
        for prev in hist:
            if abs(z - prev) <= thr:
                return CYCLE, k, z
        hist.append(z)
        if len(hist) > max_period:
            hist.pop(0)
    return BOUNDED, budget, z


def preimages_batch(a, targets):
    """All d roots of ``f(z) = w`` for each target ``w``; shape ``(len(targets), d)``."""
    a = np.ascontiguousarray(a, dtype=np.complex128)
    return _preimages_batch(a, np.asarray(targets, dtype=np.complex128), maxiter=100)


def _preimages_batch(a, w, maxiter=60):
    """All d roots of f(z) = w_b for a batch of targets (rows of the result)."""
    d = a.shape[0] - 1
    B = w.shape[0]
    ad = a[0]
    center = -a[1] / (d * ad)
    fc = np.polyval(a, center)
    rad = np.abs((w - fc) / ad) ** (1.0 / d) + 1e-3
    ang = 2.0 * np.pi * np.arange(d) / d + 0.4
    z = center + rad[:, None] * np.exp(1j * ang)[None, :]
    A = np.tile(a, (B, 1))
    A[:, -1] -= w
    for _ in range(maxiter):
        p = np.tile(A[:, :1], (1, d)).astype(np.complex128)
        dp = np.zeros_like(z)
        s = np.tile(np.abs(A[:, :1]), (1, d))
        az = np.abs(z)
        for j in range(1, d + 1):
            dp = dp * z + p
            p = p * z + A[:, j : j + 1]
            s = s * az + np.abs(A[:, j : j + 1])
        res = np.abs(p) / s
        if (res <= 4.0 * d * EPS).all():
            break
        diff = z[:, :, None] - z[:, None, :]
        diff[:, np.arange(d), np.arange(d)] = 1.0
        inv = 1.0 / diff
        inv[:, np.arange(d), np.arange(d)] = 0.0
        sm = inv.sum(axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = dp / p
            step = 1.0 / (g - sm)
        step[~np.isfinite(step) | (res <= 4.0 * d * EPS)] = 0.0
        z = z - step
    return z


def backward_orbits(a, starts, choices):
    """Random backward orbits, one per row of ``choices``.

    At step t chain b moves to preimage number ``choices[b, t]`` of its
    current point. Returns ``log|f'(z)|`` at every visited point, shape
    ``choices.shape``.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    d = a.shape[0] - 1
    da = a[:-1] * np.arange(d, 0, -1)
    B, T = choices.shape
    out = np.empty((B, T))
    cur = np.array(starts, dtype=np.complex128)
    rows = np.arange(B)
    for t in range(T):
        roots = _preimages_batch(a, cur)
        cur = roots[rows, choices[:, t]]
        out[:, t] = np.log(np.abs(np.polyval(da, cur)))
    return out


def backend_name():
    return "python"

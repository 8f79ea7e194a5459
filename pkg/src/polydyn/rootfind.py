"""Simultaneous polynomial root finding.

All roots are found at once with the Aberth-Ehrlich iteration (see
:mod:`polydyn._core` for the compiled and numpy kernels), polished with one
guarded Newton step and then grouped into clusters to report multiplicities.

Clustering uses two tests. Two approximations are merged when they are
closer than ``tol**0.25`` (relative to ``max(1, |z|)``) *and* their distance
is comparable to their Newton step ``|p/p'|``. Double roots come out about
``eps**0.5`` apart and triple roots about ``eps**(1/3)``, hence the loose
cap. For a true m-fold root the Newton step of each approximation is about
``1/m`` of the cluster spread, while well separated simple roots have Newton
steps at rounding level. The second test keeps close but distinct roots
(periodic points of high period can sit 1e-8 apart) from being merged.
The centre of an m-fold cluster is refined as a simple root of ``p^(m-1)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _core
from .errors import DegreeBudgetExceeded, IllConditionedWarning, NoConvergence, RootFindingFailed
from .poly import ComplexPoly, Poly, as_complex, poly_sub_constant

EPS = np.finfo(float).eps

#: Largest degree of ``f^n(z) - z`` handled by :func:`periodic_roots`.
DEFAULT_ROOT_BUDGET = 2**14

# a cluster is only formed when the spread is at most this many Newton steps
_NEWTON_FACTOR = 16.0
# fixed seed for the symmetry-breaking perturbation (determinism)
_SEED = 20240917


@dataclass(frozen=True)
class Root:
    value: complex
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicities.

    Attributes
    ----------
    roots : tuple of Root
        Distinct roots, sorted by real then imaginary part.
    degree_accounted : int
        Sum of multiplicities; equals the polynomial degree.
    """

    roots: tuple
    degree_accounted: int

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def values(self, with_multiplicity: bool = True) -> np.ndarray:
        """Root values as an array, each repeated by its multiplicity by default."""
        if with_multiplicity:
            out = [r.value for r in self.roots for _ in range(r.multiplicity)]
        else:
            out = [r.value for r in self.roots]
        return np.array(out, dtype=np.complex128)

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.roots), default=0.0)


def _clusters(z, step, radius):
    """Single-linkage clusters; returns a list of index arrays."""
    m = z.shape[0]
    parent = np.arange(m)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    scale = np.maximum(1.0, np.abs(z))
    reach = radius * scale
    order = np.argsort(z.real, kind="stable")
    zs = z[order]
    rmax = reach.max() if m else 0.0
    for a in range(m):
        i = order[a]
        b = a + 1
        while b < m and zs[b].real - zs[a].real <= rmax:
            j = order[b]
            dist = abs(z[i] - z[j])
            lim = min(reach[i], reach[j])
            newton = max(_NEWTON_FACTOR * max(step[i], step[j]), 64.0 * EPS * scale[i])
            if dist <= lim and dist <= newton:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
            b += 1
    groups = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return [np.array(g) for g in groups.values()]


def _assemble(z, res, step, tol, cluster_radius, residual_fn, extra_zero=0, refine=None):
    radius = cluster_radius if cluster_radius is not None else tol**0.25
    warn_radius = tol**0.25
    roots = []
    for idx in _clusters(z, step, radius):
        members = z[idx]
        if idx.size == 1:
            roots.append(Root(complex(members[0]), 1, float(res[idx[0]])))
            continue
        center = complex(members.mean())
        if refine is not None:
            center = refine(center, idx.size)
        spread = float(np.abs(members - center).max())
        if spread > warn_radius * max(1.0, abs(center)):
            warnings.warn(
                f"root cluster of size {idx.size} near {center:.6g} has spread {spread:.3g}",
                IllConditionedWarning,
                stacklevel=3,
            )
        roots.append(Root(center, int(idx.size), float(residual_fn(np.array([center]))[0])))
    if extra_zero:
        roots.append(Root(0j, extra_zero, 0.0))
    roots.sort(key=lambda r: (r.value.real, r.value.imag))
    total = sum(r.multiplicity for r in roots)
    return RootSet(tuple(roots), total)


def _initial_circle(a, d):
    """Points on the circle of radius ``1 + max|a_i/a_d|`` with a fixed jitter."""
    rad = 1.0 + np.max(np.abs(a[1:] / a[0]))
    rng = np.random.default_rng(_SEED)
    ang = 2.0 * np.pi * (np.arange(d) + 0.25 + 0.1 * rng.random(d)) / d
    return rad * (1.0 + 1e-3 * rng.random(d)) * np.exp(1j * ang)


def _residuals(a, z):
    p = np.polyval(a, z)
    s = np.polyval(np.abs(a), np.abs(z)) + np.abs(a).max()
    return np.abs(p) / s


def _refine_multiple(a, c, m, steps=8):
    """Newton on the (m-1)-th derivative, where an m-fold root is simple."""
    q = np.polyder(a, m - 1)
    dq = np.polyder(q)
    best, best_val = c, abs(np.polyval(q, c))
    for _ in range(steps):
        den = np.polyval(dq, c)
        if den == 0:
            break
        c = c - np.polyval(q, c) / den
        val = abs(np.polyval(q, c))
        if val < best_val:
            best, best_val = c, val
        else:
            break
    return complex(best)


def all_roots(
    p: Poly,
    tol: float = 1e-10,
    precision_bits: Optional[int] = None,
    maxiter: Optional[int] = None,
    cluster_radius: Optional[float] = None,
) -> RootSet:
    """All roots of ``p`` with multiplicity.

    Parameters
    ----------
    p : RationalPoly or ComplexPoly
        Polynomial of degree at least 1.
    tol : float
        Bound on the relative backward residual ``|p(r)| / sum |a_i||r|^i``.
        Clusters are detected at radius ``tol**0.25`` subject to the
        Newton-step test described in the module docstring.
    precision_bits : int, optional
        Above 53, solve with mpmath at this working precision instead.
    maxiter : int, optional
        Iteration cap for the Aberth sweeps.
    cluster_radius : float, optional
        Override of the relative clustering radius.

    Raises
    ------
    NoConvergence
        The iteration cap was hit with residuals above ``tol``.
    """
    if p.degree < 1:
        raise ValueError("all_roots needs degree >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if precision_bits is not None and precision_bits > 53:
        return _all_roots_mp(p, tol, precision_bits, cluster_radius)
    a = as_complex(p).array
    # exact zero roots from trailing zero coefficients
    nz = 0
    while a.shape[0] - nz > 1 and a[a.shape[0] - 1 - nz] == 0:
        nz += 1
    if nz:
        a = a[: a.shape[0] - nz]
    d = a.shape[0] - 1
    if d == 0:
        return RootSet((Root(0j, nz, 0.0),), nz)
    if d == 1:
        r = -a[1] / a[0]
        roots = [Root(complex(r), 1, 0.0)]
        if nz:
            roots.append(Root(0j, nz, 0.0))
        roots.sort(key=lambda x: (x.value.real, x.value.imag))
        return RootSet(tuple(roots), d + nz)
    maxiter = maxiter or max(200, 10 * d)
    k = _core.kernels
    z, res, it, step = k.aberth_coeffs(a, _initial_circle(a, d), maxiter, _core.threads())
    z, res = k.newton_polish_coeffs(a, z)
    bad = ~(res <= tol)
    if bad.any():
        raise NoConvergence(
            f"{int(bad.sum())} of {d} roots above residual tol {tol:g} after {it} sweeps "
            f"(worst {float(np.nanmax(np.where(np.isfinite(res), res, np.inf))):.3g})"
        )
    # Newton steps at the polished points, for the clustering test
    dp = np.polyval(np.polyder(a), z)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = np.abs(np.polyval(a, z) / dp)
    step = np.where(np.isnan(step), np.inf, step)
    return _assemble(
        z, res, step, tol, cluster_radius, lambda w: _residuals(a, w), nz,
        refine=lambda c, m: _refine_multiple(a, c, m),
    )


def _all_roots_mp(p, tol, bits, cluster_radius):
    import mpmath

    with mpmath.workprec(bits):
        coeffs = [mpmath.mpc(c) if not hasattr(c, "numerator") else mpmath.mpf(c.numerator) / c.denominator for c in p.coeffs]
        d = len(coeffs) - 1
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=max(100, 20 * d), extraprec=bits)
        except mpmath.libmp.NoConvergence as exc:
            raise NoConvergence(str(exc)) from exc
        roots = [mpmath.mpc(r) for r in roots]
        dcoeffs = [c * (d - i) for i, c in enumerate(coeffs[:-1])]
        res, step = [], []
        for r in roots:
            val = mpmath.polyval(coeffs, r)
            scale = mpmath.polyval([abs(c) for c in coeffs], abs(r))
            res.append(float(abs(val) / scale) if scale else 0.0)
            dv = mpmath.polyval(dcoeffs, r)
            step.append(float(abs(val / dv)) if dv != 0 else (0.0 if val == 0 else math.inf))
    z = np.array([complex(r) for r in roots], dtype=np.complex128)
    res = np.array(res)
    if not (res <= tol).all():
        raise NoConvergence(f"extended precision residual {res.max():.3g} above {tol:g}")
    a = as_complex(p).array
    return _assemble(z, res, np.array(step), tol, cluster_radius, lambda w: _residuals(a, w))


def preimages(p: Poly, w, tol: float = 1e-10) -> RootSet:
    """The ``d`` solutions of ``p(z) = w`` with multiplicity."""
    if p.degree < 2:
        raise ValueError("preimages needs degree >= 2")
    return all_roots(poly_sub_constant(p, w), tol=tol)


def _tree_start(f: ComplexPoly, n: int) -> np.ndarray:
    """Level-n backward tree of the most repelling fixed point.

    Periodic points of period dividing ``n`` lie within a contracted
    neighbourhood of these preimages, so Aberth started here converges in a
    handful of sweeps instead of hundreds from a circle.
    """
    a = f.array
    fixed = all_roots(_fixed_poly(f), tol=1e-6).values()
    da = np.polyder(a)
    w0 = fixed[np.argmax(np.abs(np.polyval(da, fixed)))]
    pts = np.array([w0], dtype=np.complex128)
    k = _core.kernels
    for _ in range(n):
        pts = k.preimages_batch(a, pts).ravel()
    rng = np.random.default_rng(_SEED)
    m = pts.shape[0]
    scale = 1e-9 * (1.0 + np.abs(pts))
    return pts + scale * (rng.standard_normal(m) + 1j * rng.standard_normal(m))


def _fixed_poly(f: ComplexPoly) -> ComplexPoly:
    cs = list(f.coeffs)
    cs[-2] -= 1
    return ComplexPoly(tuple(cs))


def periodic_roots(
    f: Poly,
    n: int,
    tol: float = 1e-10,
    budget: int = DEFAULT_ROOT_BUDGET,
    maxiter: int = 500,
    cluster_radius: Optional[float] = None,
) -> RootSet:
    """Roots of ``f^n(z) - z`` with multiplicity, without expanding ``f^n``.

    Values and derivatives come from the orbit of each point, so the
    coefficients of the iterate (which grow doubly exponentially) never
    appear. Raises :class:`DegreeBudgetExceeded` when ``d**n > budget``.
    """
    f = as_complex(f)
    d = f.degree
    if d < 2:
        raise ValueError("periodic_roots needs degree >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    N = d**n
    if N > budget:
        raise DegreeBudgetExceeded(f"d^n = {N} exceeds root budget {budget}")
    if n == 1:
        return all_roots(_fixed_poly(f), tol=tol, cluster_radius=cluster_radius)
    a = f.array
    k = _core.kernels
    big = 1e100
    z, res, it, step = k.aberth_iterated(a, n, _tree_start(f, n), maxiter, big, _core.threads())
    bad = ~(res <= tol)
    if bad.any():
        raise NoConvergence(
            f"{int(bad.sum())} of {N} periodic points above residual tol {tol:g} after {it} sweeps"
        )

    def resid(w):
        return k.aberth_iterated(a, n, w, 0, big, 1)[1]

    return _assemble(z, res, step, tol, cluster_radius, resid)


__all__ = [
    "DEFAULT_ROOT_BUDGET",
    "Root",
    "RootSet",
    "RootFindingFailed",
    "all_roots",
    "periodic_roots",
    "preimages",
]

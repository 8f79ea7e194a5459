"""Lyapunov exponent of a polynomial: three estimators and an inverse solver.

* Przytycki: ``L = log d + sum_c g_f(c)`` over critical points with
  multiplicity. For rational input, Galois classes of critical points that
  are certified preperiodic by exact arithmetic contribute exactly 0.
* Spectral: ``(1/(n d^n)) sum log|rho|`` over the multiplier spectrum.
* Ergodic: backward random iteration samples the maximal entropy measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _core
from .algebraic import critical_classes
from .errors import NotBracketed, RootFindingFailed
from .escape import DEFAULT_BUDGET, escape_radius, green, in_filled_julia
from .poly import ComplexPoly, Poly, RationalPoly, as_complex, critical_points
from .rootfind import DEFAULT_ROOT_BUDGET, all_roots

SPECTRAL_EXCLUDE = 1e-9
CRIT_PRECISION_BITS = 200


@dataclass(frozen=True)
class LyapunovEstimate:
    """One estimate of ``L_f``.

    ``error_bound`` is a rigorous truncation bound for the Przytycki method,
    a heuristic successive-n gap for the spectral method and None for the
    ergodic method, which reports ``std_error`` instead.
    """

    value: float
    method: str
    error_bound: Optional[float] = None
    std_error: Optional[float] = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"value": self.value, "method": self.method, "metadata": self.metadata}
        if self.error_bound is not None:
            out["error_bound"] = self.error_bound
        if self.std_error is not None:
            out["std_error"] = self.std_error
        return out


def _critical_terms(f: Poly, tol: float):
    """Critical points as ``(value, multiplicity, certified_zero)`` triples."""
    terms = []
    if isinstance(f, RationalPoly):
        for cls in critical_classes(f):
            if cls.preperiodic:
                terms.append((None, cls.count, True))
                continue
            if cls.degree == 1:
                terms.append((complex(cls.rational_point), cls.multiplicity, False))
                continue
            # exact factor: extended precision keeps near-collisions accurate
            for r in all_roots(RationalPoly(cls.factor), tol=tol, precision_bits=CRIT_PRECISION_BITS):
                terms.append((r.value, r.multiplicity * cls.multiplicity, False))
    else:
        for r in critical_points(f, tol=tol):
            terms.append((r.value, r.multiplicity, False))
    return terms


def lyap_przytycki(f: Poly, tol: float = 1e-10, budget: int = DEFAULT_BUDGET) -> LyapunovEstimate:
    """Lyapunov exponent from the Green function at the critical points.

    Raises
    ------
    RootFindingFailed
    """
    d = f.degree
    if d < 2:
        raise ValueError("lyap_przytycki needs degree >= 2")
    terms = _critical_terms(f, 1e-10)
    each = tol / (d - 1)
    total, err = 0.0, 0.0
    crit = []
    certified = 0
    for value, mult, zero in terms:
        if zero:
            certified += mult
            continue
        g = green(f, value, tol=each, budget=budget)
        total += mult * g.value
        err += mult * g.error_bound
        crit.append({"point": [value.real, value.imag], "multiplicity": mult, "green": g.value})
    meta = {"critical_points": crit, "certified_preperiodic": certified, "tol": tol}
    return LyapunovEstimate(math.log(d) + total, "przytycki", error_bound=err, metadata=meta)


def _spectral_value(f, n, exclude_below, budget):
    from .spectra import spectrum

    d = f.degree
    level = spectrum(f, n, budget=budget)
    lengths = level.lengths
    keep = lengths > exclude_below
    return float(np.log(lengths[keep]).sum() / (n * d**n)), int(keep.sum()), len(level)


def lyap_spectral(
    f: Poly,
    n: int,
    exclude_below: float = SPECTRAL_EXCLUDE,
    budget: int = DEFAULT_ROOT_BUDGET,
) -> LyapunovEstimate:
    """Lyapunov exponent from the length spectrum ``L_n``.

    The reported ``error_bound`` is the heuristic gap to the level ``n - 1``
    estimate (infinite for ``n = 1``).

    Raises
    ------
    DegreeBudgetExceeded, RootFindingFailed
    """
    fc = as_complex(f)
    value, used, size = _spectral_value(fc, n, exclude_below, budget)
    if n > 1:
        prev, _, _ = _spectral_value(fc, n - 1, exclude_below, budget)
        gap = abs(value - prev)
    else:
        prev, gap = None, math.inf
    meta = {"n": n, "spectrum_size": size, "entries_used": used, "previous_level": prev, "error_kind": "heuristic"}
    return LyapunovEstimate(value, "spectral", error_bound=gap, metadata=meta)


def lyap_ergodic(
    f: Poly,
    samples: int = 10**5,
    depth: int = 50,
    seed: int = 0,
    chains: int = 100,
) -> LyapunovEstimate:
    """Lyapunov exponent by backward random iteration.

    ``chains`` independent chains start on ``|z| = 2 B2`` and step to a
    uniformly chosen preimage. After ``depth`` burn-in steps each chain
    contributes ``samples // chains`` values of ``log|f'|``. The estimate is
    the mean and the standard error comes from the spread of chain means.
    Chain ``i`` draws from ``SeedSequence(seed).spawn(chains)[i]``, so the
    result does not depend on how chains are scheduled.
    """
    fc = as_complex(f)
    d = fc.degree
    if d < 2:
        raise ValueError("lyap_ergodic needs degree >= 2")
    chains = max(2, min(chains, samples))
    per = max(1, samples // chains)
    T = depth + per
    R = 2.0 * escape_radius(fc).growth_radius
    starts = np.empty(chains, dtype=np.complex128)
    choices = np.empty((chains, T), dtype=np.int64)
    for i, ss in enumerate(np.random.SeedSequence(seed).spawn(chains)):
        rng = np.random.default_rng(ss)
        starts[i] = R * np.exp(2j * np.pi * rng.random())
        choices[i] = rng.integers(0, d, size=T)
    logs = _core.kernels.backward_orbits(fc.array, starts, choices)
    if not np.isfinite(logs[:, depth:]).all():
        raise RootFindingFailed("backward orbit hit a critical point or failed to converge")
    means = logs[:, depth:].mean(axis=1)
    value = float(means.mean())
    se = float(means.std(ddof=1) / math.sqrt(chains))
    meta = {"samples": chains * per, "chains": chains, "depth": depth, "seed": seed}
    return LyapunovEstimate(value, "ergodic", std_error=se, metadata=meta)


# ---------------------------------------------------------------------------
# inverse problem for the unicritical family z^d + c, c > 0


def _unicritical(d, c):
    return ComplexPoly((1.0,) + (0.0,) * (d - 1) + (float(c),))


def _lyap_unicritical(d, c, tol):
    # single critical point 0 of multiplicity d - 1
    g = green(_unicritical(d, c), 0.0, tol=tol / (d - 1))
    return math.log(d) + (d - 1) * g.value


def _escapes(d, c, budget):
    return not in_filled_julia(_unicritical(d, c), 0.0, budget).inside


def unicritical_solve(d: int, L0: float, tol: float = 1e-8, budget: int = DEFAULT_BUDGET, grid: int = 1000) -> float:
    """Real ``c > 0`` with ``L(z^d + c) = L0``.

    Brackets ``[c_esc, c_hi]`` where ``c_esc`` is (a numerical lower bound
    for) the first real ``c > 0`` with escaping critical orbit and ``c_hi``
    is doubled until ``L(c_hi) > L0``. ``L`` is checked to be nondecreasing
    on ``grid + 1`` equally spaced points of the bracket, then bisected.

    Raises
    ------
    NotBracketed
        ``L0 <= log d``, or the monotonicity scan failed.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if not L0 > math.log(d):
        raise NotBracketed(f"L0 = {L0} must exceed log d = {math.log(d)}")
    inner = tol / 4
    # c_esc: doubling then bisection on the escape predicate
    lo, hi = 0.0, 1.0
    while not _escapes(d, hi, budget):
        lo, hi = hi, 2.0 * hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _escapes(d, mid, budget):
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * hi:
            break
    c_esc = lo
    c_hi = max(1.0, 2.0 * hi)
    while _lyap_unicritical(d, c_hi, inner) <= L0:
        c_hi *= 2.0
        if c_hi > 1e300:
            raise NotBracketed("no upper bracket found")
    cs = np.linspace(c_esc, c_hi, grid + 1)
    Ls = np.array([_lyap_unicritical(d, c, inner) for c in cs])
    if np.any(np.diff(Ls) < -tol):
        k = int(np.argmin(np.diff(Ls)))
        raise NotBracketed(f"L decreases between c = {cs[k]:.6g} and {cs[k + 1]:.6g}")
    # tighten the bracket from the scan, then bisect
    j = int(np.searchsorted(Ls, L0))
    lo, hi = cs[max(j - 1, 0)], cs[min(j, grid)]
    best, best_gap = hi, abs(Ls[min(j, grid)] - L0)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        Lm = _lyap_unicritical(d, mid, inner)
        if abs(Lm - L0) < best_gap:
            best, best_gap = mid, abs(Lm - L0)
        if best_gap < tol / 2 or hi - lo <= 4e-16 * hi:
            break
        if Lm < L0:
            lo = mid
        else:
            hi = mid
    return float(best)

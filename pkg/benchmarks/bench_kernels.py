"""Timing of the compiled kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``. Each kernel
is called with identical inputs on every available backend; the table shows
the best wall time over the repeats and the speed-up relative to Python.
"""

import argparse
import time

import numpy as np

from polydyn import _core


def _circle(d, r=1.5):
    return r * np.exp(2j * np.pi * (np.arange(d) + 0.25) / d)


def cases():
    rng = np.random.default_rng(0)
    a64 = rng.normal(size=65) + 1j * rng.normal(size=65)
    a64[0] = 1.0
    quad = np.array([1.0, 0.0, -6.0], dtype=np.complex128)
    cubic = np.array([1.0, 0.0, -3.0, 5.0], dtype=np.complex128)
    grid = (rng.uniform(-2, 2, 400) + 1j * rng.uniform(-2, 2, 400)).tolist()
    c_bounded = np.array([1.0, 0.0, -0.12 + 0.74j], dtype=np.complex128)
    choices = rng.integers(0, 3, size=(256, 200))
    starts = rng.normal(size=256) + 1j * rng.normal(size=256)
    return {
        "aberth_coeffs (d=64)": lambda k: k.aberth_coeffs(a64, _circle(64, 2.0), 500),
        "aberth_iterated (z^2-6, n=10)": lambda k: k.aberth_iterated(quad, 10, _circle(1024, 3.0), 200, 1e150),
        "escape_orbit (400 seeds)": lambda k: [k.escape_orbit(c_bounded, z, 1e6, 2000, 1e-13, 64) for z in grid],
        "backward_orbits (256 x 200, cubic)": lambda k: k.backward_orbits(cubic, starts, choices),
    }


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    names = sorted(_core.BACKENDS, key=lambda n: n != "python")
    print(f"{'kernel':38s}" + "".join(f"{n:>12s}" for n in names) + f"{'speed-up':>10s}")
    for label, fn in cases().items():
        times = [bench(lambda: fn(_core.get_backend(n)), args.repeat) for n in names]
        ratio = times[0] / times[-1] if len(times) > 1 else 1.0
        print(f"{label:38s}" + "".join(f"{t * 1e3:10.1f}ms" for t in times) + f"{ratio:9.1f}x")


if __name__ == "__main__":
    main()

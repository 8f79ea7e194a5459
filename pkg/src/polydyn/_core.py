"""Kernel backend selection.

The compiled Cython kernels are used when importable; otherwise, or when
``POLYDYN_PURE_PYTHON=1`` is set, the numpy fallback is used. Both expose the
same functions. ``POLYDYN_THREADS`` caps the OpenMP threads used by the
compiled Aberth sweeps.
"""

import os

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

BACKENDS = {"python": _fallback}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

if os.environ.get("POLYDYN_PURE_PYTHON") or _compiled is None:
    kernels = _fallback
else:
    kernels = _compiled

BACKEND = kernels.backend_name()


def get_backend(name):
    """Return the kernel module called ``name`` ('cython' or 'python')."""
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available; have {sorted(BACKENDS)}") from None


def threads():
    try:
        return max(1, int(os.environ.get("POLYDYN_THREADS", "1")))
    except ValueError:
        return 1

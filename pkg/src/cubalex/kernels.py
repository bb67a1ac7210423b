"""Kernel backend selection: compiled extension with pure-python fallback."""

import os

if os.environ.get("CUBALEX_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # compiled
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
gauss_linking_sum = _impl.gauss_linking_sum
torus_distances = _impl.torus_distances


def available_backends():
    out = ["python"]
    try:
        from . import _kernels  # noqa: F401
        out.append("cython")
    except ImportError:
        pass
    return out

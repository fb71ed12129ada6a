"""Backend selection for the per-pixel kernels.

Two interchangeable backends exist: a Cython extension (``_core``) and a
pure-NumPy fallback (``_numpy``). The compiled one is preferred when the
extension built; the environment variable ``EASDET_BACKEND`` (``compiled``
or ``python``) forces the choice at import time, and ``set_backend()``
switches at runtime. Both produce bitwise-identical results, so the choice
only affects speed.
"""

import os

import numpy as np

from . import _numpy

_backends = {"python": _numpy}
try:
    from . import _core

    _backends["compiled"] = _core
except ImportError:
    _core = None

EIG_EPS = _numpy.EIG_EPS


def available_backends():
    return sorted(_backends)


_forced = os.environ.get("EASDET_BACKEND")
if _forced is not None and _forced not in _backends:
    raise RuntimeError(
        f"EASDET_BACKEND={_forced!r} requested but only {available_backends()} "
        f"are available (is the extension built?)"
    )
_impl = _backends[_forced] if _forced else _backends.get("compiled", _numpy)


def backend_name():
    return _impl.NAME


def set_backend(name):
    """Switch the active backend ('compiled' or 'python'). Returns the
    previously active name."""
    global _impl
    if name not in _backends:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    prev = _impl.NAME
    _impl = _backends[name]
    return prev


def _c2d(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def sep_convolve(img, kx, ky):
    return _impl.sep_convolve(
        _c2d(img),
        np.ascontiguousarray(kx, dtype=np.float64),
        np.ascontiguousarray(ky, dtype=np.float64),
    )


def central_diff(img):
    return _impl.central_diff(_c2d(img))


def moment_products(ix, iy, clamp, quadrant_mask):
    return _impl.moment_products(_c2d(ix), _c2d(iy), float(clamp), bool(quadrant_mask))


def box_mean(img, k):
    return _impl.box_mean(_c2d(img), int(k))


def eas8(tr):
    return _impl.eas8(_c2d(tr))


def edge_keep(sxx, syy, sxy, thr):
    return _impl.edge_keep(_c2d(sxx), _c2d(syy), _c2d(sxy), float(thr))


def nms_strict(score, radius):
    return _impl.nms_strict(_c2d(score), int(radius))

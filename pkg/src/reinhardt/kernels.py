"""Backend selection for the hot kernels.

The compiled extension is used when it imports; set ``REINHARDT_PURE_PYTHON=1``
to force the numpy fallback (the test suite runs both).
"""
import os

import numpy as np

from . import _pykernels

THEOREM_I = _pykernels.THEOREM_I
SINE_BAND = _pykernels.SINE_BAND
HINGE_CAP = _pykernels.HINGE_CAP

_impl = _pykernels
BACKEND = "python"
if not os.environ.get("REINHARDT_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels


def use_backend(name):
    """Switch backend at runtime ("cython" or "python"); returns the previous name."""
    global _impl, BACKEND
    previous = BACKEND
    if name == "python":
        _impl, BACKEND = _pykernels, "python"
    elif name == "cython":
        from . import _ckernels
        _impl, BACKEND = _ckernels, "cython"
    else:
        raise ValueError(f"unknown backend {name!r}")
    return previous


def _params(params):
    p = [float(x) for x in params] + [0.0, 0.0, 0.0]
    return tuple(p[:3])


def _flat(*arrays):
    arrs = np.broadcast_arrays(*(np.asarray(a, dtype=np.float64) for a in arrays))
    return arrs[0].shape, [np.ascontiguousarray(a).ravel() for a in arrs]


def g_modulus(code, params, m1, m2):
    shape, (a, b) = _flat(m1, m2)
    return _impl.g_modulus(code, _params(params), a, b).reshape(shape)


def shadow(code, params, u1, u2):
    shape, (a, b) = _flat(u1, u2)
    return _impl.shadow(code, _params(params), a, b).reshape(shape)


def hinge_batch(code, params, A, t1, t2, u1, u2):
    _, (t1, t2) = _flat(t1, t2)
    _, (u1, u2) = _flat(u1, u2)
    A = tuple(float(x) for x in np.asarray(A, dtype=float).ravel())
    return _impl.hinge_batch(code, _params(params), A, t1, t2, u1, u2)


def bisect(code, params, m1_in, m2_in, m1_out, m2_out, tol, maxiter=200):
    _, arrs = _flat(m1_in, m2_in, m1_out, m2_out)
    return _impl.bisect(code, _params(params), *arrs, float(tol), int(maxiter))

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from reinhardt import _pykernels, kernels

from conftest import BACKENDS

CASES = [
    (1, (0.5, 0, 0)), (1, (1 / 3, 0, 0)), (1, (-1.0, 0, 0)),
    (11, (0.5, 3.0, 0)), (11, (-1.0, 2.0, 0)),
    (12, (-1.0, 1.0, 2.0)), (12, (2.0, 1.0, math.inf)),
    (13, (1.0, 2.0, 0)),
    (14, (2.0, 1.0, 5.0)), (14, (-2.0, 1.0, math.inf)),
    (15, (1.0, 1.0, 0)),
    (100, (0, 0, 0)),
]

needs_c = pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")


def _points(seed=0, n=5000):
    rng = np.random.default_rng(seed)
    u1 = rng.uniform(-8, 2, n)
    u2 = rng.uniform(-8, 2, n)
    u1[:3] = -np.inf
    return u1, u2


def _same(a, b, rtol=1e-12):
    a, b = np.asarray(a), np.asarray(b)
    fin = np.isfinite(a)
    assert np.array_equal(fin, np.isfinite(b))
    assert np.array_equal(a[~fin], b[~fin])
    np.testing.assert_allclose(a[fin], b[fin], rtol=rtol, atol=1e-13)


@needs_c
@pytest.mark.parametrize("code,params", CASES)
def test_backends_agree_on_g_and_shadow(code, params):
    from reinhardt import _ckernels
    u1, u2 = _points()
    with np.errstate(all="ignore"):
        m1, m2 = np.exp(u1), np.exp(u2)
    _same(_pykernels.g_modulus(code, params, m1, m2), _ckernels.g_modulus(code, params, m1, m2))
    # the compiled shadow skips the exp/log round trip, so only agree to roundoff
    _same(_pykernels.shadow(code, params, u1, u2), _ckernels.shadow(code, params, u1, u2),
          rtol=1e-12)


@needs_c
@pytest.mark.parametrize("code,params", CASES)
def test_backends_agree_on_hinge(code, params):
    from reinhardt import _ckernels
    u1, u2 = _points(1, 800)
    u1, u2 = u1[3:], u2[3:]
    rng = np.random.default_rng(2)
    t1, t2 = rng.uniform(-2, 2, 16), rng.uniform(-2, 2, 16)
    for A in ((1.0, 0.0, 0.0, 1.0), (0.0, 1.0, 1.0, 0.0), (1.0, 2.0, 0.0, -1.0)):
        a = _pykernels.hinge_batch(code, params, A, t1, t2, u1, u2)
        b = _ckernels.hinge_batch(code, params, A, t1, t2, u1, u2)
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-12)


@needs_c
def test_backends_agree_on_bisect():
    from reinhardt import _ckernels
    rng = np.random.default_rng(3)
    n = 400
    ang = rng.uniform(0, math.pi / 2, n)
    ins = (0.1 * np.cos(ang), 0.1 * np.sin(ang))
    outs = (2 * np.cos(ang), 2 * np.sin(ang))
    a = _pykernels.bisect(1, (0.5, 0, 0), *ins, *outs, 1e-12, 200)
    b = _ckernels.bisect(1, (0.5, 0, 0), *ins, *outs, 1e-12, 200)
    assert a[2].all() and b[2].all()
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])
    assert np.allclose(np.hypot(a[0], a[1]), 1.0, atol=1e-11)


def test_dispatch_shapes_and_values(backend):
    m1 = np.array([[0.0, 0.5], [0.9, 2.0]])
    g = kernels.g_modulus(1, (0.5,), m1, 0.0)
    assert g.shape == (2, 2)
    np.testing.assert_allclose(g, m1 ** 2 - 1.0)
    assert kernels.BACKEND == backend


def test_unknown_code_rejected(backend):
    with pytest.raises(ValueError):
        kernels.g_modulus(7, (0, 0, 0), np.ones(2), np.ones(2))


def test_unknown_backend_name():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


def test_environment_forces_pure_python():
    env = dict(os.environ, REINHARDT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from reinhardt import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_hinge_is_capped(backend):
    u1 = np.array([-0.5])
    u2 = np.array([-0.5])
    far = kernels.hinge_batch(1, (0.5,), (1, 0, 0, 1), [10.0], [10.0], u1, u2)
    assert far[0] == _pykernels.HINGE_CAP
    home = kernels.hinge_batch(1, (0.5,), (1, 0, 0, 1), [0.0], [0.0], u1, u2)
    assert home[0] == 0.0

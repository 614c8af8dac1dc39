import os
import subprocess
import sys

import numpy as np
import pytest

from orlicz_hy import _pykernels, kernels
from orlicz_hy.young import pair_from_spec

try:
    from orlicz_hy import _ckernels
except ImportError:
    _ckernels = None

needs_compiled = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")

SPECS = ["power:1.5", "power:3", "exp", "cosh", "xplog:1.5", "riordan:1.5", "riordan-psi:1.5"]


def kernel_functions():
    out = []
    for spec in SPECS:
        pair = pair_from_spec(spec)
        for side in (pair.phi, pair.psi):
            if side.kernel is not None:
                out.append(pytest.param(side.kernel, id=side.label))
    return out


X = np.concatenate([[0.0], np.geomspace(1e-8, 50.0, 2001)])


@needs_compiled
@pytest.mark.parametrize("k", kernel_functions())
def test_backends_agree_on_eval_and_deriv(k):
    for fn in ("family_eval", "family_deriv"):
        a = getattr(_pykernels, fn)(k.kind, k.params, k.scale, k.conj, X)
        b = getattr(_ckernels, fn)(k.kind, k.params, k.scale, k.conj, X)
        fin = np.isfinite(a)
        np.testing.assert_array_equal(fin, np.isfinite(b))
        np.testing.assert_allclose(a[fin], b[fin], rtol=1e-12, atol=1e-18)


@needs_compiled
@pytest.mark.parametrize("k", kernel_functions())
def test_backends_agree_on_gauge(k):
    rng = np.random.default_rng(0)
    v = np.abs(rng.standard_normal(300))
    w = np.full(300, 1 / 300)
    thr = float(_pykernels.family_eval(k.kind, k.params, k.scale, k.conj, np.array([1.0]))[0])
    a = _pykernels.gauge(k.kind, k.params, k.scale, k.conj, v, w, thr, 1e-14)[0]
    b = _ckernels.gauge(k.kind, k.params, k.scale, k.conj, v, w, thr, 1e-14)[0]
    assert a == pytest.approx(b, rel=1e-12)
    ma = _pykernels.modular(k.kind, k.params, k.scale, k.conj, v, w, a)
    mb = _ckernels.modular(k.kind, k.params, k.scale, k.conj, v, w, a)
    assert ma == pytest.approx(mb, rel=1e-12)


@needs_compiled
def test_compiled_backend_selected_by_default():
    assert kernels.BACKEND == _ckernels.NAME


def test_pure_python_override():
    env = dict(os.environ, ORLICZ_HY_PURE_PYTHON="1")
    code = "from orlicz_hy import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == _pykernels.NAME
    assert kernels.load_backend(pure=True) is _pykernels


def test_gauge_scalar_semantics():
    # constant |f| = c: Phi(c / lam) = Phi(1) gives lam = c
    k = pair_from_spec("riordan:1.5").phi.kernel
    thr = float(_pykernels.family_eval(k.kind, k.params, k.scale, k.conj, np.array([1.0]))[0])
    lam, its, width = _pykernels.gauge(k.kind, k.params, k.scale, k.conj, np.full(5, 3.0), np.full(5, 0.2), thr, 1e-14)
    assert lam == pytest.approx(3.0, rel=1e-13)
    assert its > 0 and width >= 0
    assert _pykernels.gauge(k.kind, k.params, k.scale, k.conj, np.zeros(3), np.full(3, 1 / 3), thr, 1e-14)[0] == 0

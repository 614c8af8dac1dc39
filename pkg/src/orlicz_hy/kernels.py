"""Backend selection for the numerical kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy implementation in ``_pykernels`` takes over.  Setting the environment
variable ``ORLICZ_HY_PURE_PYTHON=1`` forces the numpy path.
"""

import os

from . import _pykernels

POWER = _pykernels.POWER
EXP = _pykernels.EXP
EXP_CONJ = _pykernels.EXP_CONJ
COSH = _pykernels.COSH
COSH_CONJ = _pykernels.COSH_CONJ
XPLOG = _pykernels.XPLOG
LOGLOG = _pykernels.LOGLOG

FAMILY_NAMES = {
    POWER: "power",
    EXP: "exp",
    EXP_CONJ: "exp-conj",
    COSH: "cosh",
    COSH_CONJ: "cosh-conj",
    XPLOG: "xplog",
    LOGLOG: "loglog",
}


def load_backend(pure=None):
    """Return the kernel module, preferring the compiled one."""
    if pure is None:
        pure = os.environ.get("ORLICZ_HY_PURE_PYTHON", "") not in ("", "0")
    if not pure:
        try:
            from . import _ckernels
        except ImportError:
            pass
        else:
            return _ckernels
    return _pykernels


backend = load_backend()
BACKEND = backend.NAME

family_eval = backend.family_eval
family_deriv = backend.family_deriv
conj_argmax = backend.conj_argmax
modular = backend.modular
gauge = backend.gauge
solve_gauge = _pykernels.solve_gauge

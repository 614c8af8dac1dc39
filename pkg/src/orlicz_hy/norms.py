"""Modulars and norms on both sides of the Fourier transform.

Function side: the modular ``rho(f) = integral Phi(|f|) dmu``, the Luxemburg
gauge and the Orlicz (dual) norm, all by quadrature.  Coefficient side: the
weighted ``l^p`` norms, Schatten variants and the Orlicz gauge of the profile
``F(pi) = k^-1/2 ||sigma(pi)||_HS``.

Gauges use the threshold ``Phi(1)`` by default, so that constants have norm
``|c|`` for every Young function; pass ``classical=True`` for threshold 1.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BadExponent, BadParam, NonFiniteModular, UnknownSpec
from .young import from_spec, pair_from_spec

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class NormResult:
    value: float
    method: str
    refinement_error: float = 0.0
    iterations: int = 0

    def __float__(self):
        return self.value


def threshold(phi, classical=False):
    return 1.0 if classical else phi.eval(1.0)


def _weighted_modular(phi, values, weights, lam=1.0):
    k = phi.kernel
    if k is not None:
        return kernels.modular(k.kind, k.params, k.scale, k.conj, values, weights, lam)
    terms = phi.eval(values / lam)
    used = weights > 0
    if not np.all(np.isfinite(terms[used])):
        return math.inf
    return float(np.sum(weights * terms))


def _weighted_gauge(phi, values, weights, thr, rtol):
    values = np.ascontiguousarray(values, dtype=float).ravel()
    weights = np.ascontiguousarray(weights, dtype=float).ravel()
    k = phi.kernel
    try:
        if k is not None:
            lam, its, width = kernels.gauge(k.kind, k.params, k.scale, k.conj, values, weights, thr, rtol)
        else:
            vmax = float(values.max()) if values.size else 0.0
            lam, its, width = kernels.solve_gauge(
                lambda t: _weighted_modular(phi, values, weights, t), vmax, thr, rtol
            )
    except OverflowError as exc:
        raise NonFiniteModular(f"{phi.label}: {exc}") from None
    return NormResult(float(lam), "bisection", float(lam) * float(width), int(its))


def modular(phi, f):
    """``sum w Phi(|f|)`` over the quadrature; ``inf`` if any term is infinite."""
    return _weighted_modular(phi, np.abs(f.values).ravel(), f.weights.ravel())


def luxemburg(phi, f, classical=False, rtol=1e-14):
    """``inf{lam > 0 : rho(f / lam) <= Phi(1)}`` (threshold 1 if ``classical``)."""
    return _weighted_gauge(phi, np.abs(f.values), f.weights, threshold(phi, classical), rtol)


def _scan_modulars(phi, a, w, lams, chunk=2048):
    out = np.empty(lams.size)
    for s in range(0, lams.size, chunk):
        lam = lams[s:s + chunk]
        with np.errstate(over="ignore", invalid="ignore"):
            terms = phi.eval(a[None, :] / lam[:, None])
        out[s:s + chunk] = terms @ w
    return out


def luxemburg_scan(phi, f, n=100_000, lo=None, hi=None, classical=False, stages=2):
    """Dense log-grid scan for the Luxemburg gauge; an independent oracle.

    Each stage evaluates the modular at ``n`` scales and keeps the first one
    meeting the threshold; later stages rescan the cell that brackets it.
    Only ``Phi.eval`` is used, never the bisection kernel.
    """
    a = np.abs(f.values).ravel()
    w = f.weights.ravel()
    top = float(a.max())
    if top == 0:
        return NormResult(0.0, "dense-scan", 0.0, 0)
    lo = top * 1e-3 if lo is None else lo
    hi = top * 1e3 if hi is None else hi
    thr = threshold(phi, classical)
    for _ in range(stages):
        lams = np.geomspace(lo, hi, n)
        ok = _scan_modulars(phi, a, w, lams) <= thr
        first = int(np.argmax(ok))
        if not ok[first]:
            raise NonFiniteModular("scan range too small")
        if first == 0:
            hi = lams[0]
            break
        lo, hi = lams[first - 1], lams[first]
    return NormResult(float(hi), "dense-scan", float(hi - lo), n * stages)


def lp_norm(f, p):
    """Quadrature ``L^p(mu)`` norm."""
    p = float(p)
    if p < 1:
        raise BadExponent(f"p must be >= 1, got {p}")
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max())
    top = float(a.max())
    if top == 0:
        return 0.0
    return top * float(np.sum(f.weights * (a / top) ** p)) ** (1.0 / p)


def _orlicz_extremal(pair, a, w):
    """Maximiser of the Orlicz sup for the magnitudes ``a``.

    Among ``v >= 0`` with ``rho_Psi(v) <= Phi(1)`` the integral of ``a v`` is
    maximised by ``v = Phi'(a / lam)`` with ``lam`` making the constraint
    active.  Where ``Phi'`` jumps, ``rho_Psi(Phi'(a / lam))`` jumps too; the
    nodes crossing the jump may then take any value in between, so the two
    ends of the final bracket are blended to make the constraint exact.
    """
    phi, psi = pair.phi, pair.psi
    thr = phi.eval(1.0)
    used = w > 0

    def rho_of(v):
        if not np.all(np.isfinite(v[used])):
            return math.inf
        return _weighted_modular(psi, v, w)

    def rho(lam):
        return rho_of(phi.deriv(a / lam))

    lam, its, width = kernels.solve_gauge(rho, float(a.max()), thr, 1e-14)
    v_hi = phi.deriv(a / lam)
    if width == 0.0:
        return v_hi, its
    v_lo = phi.deriv(a / (lam * math.exp(-width)))
    if not np.all(np.isfinite(v_lo[used])) or rho_of(v_lo) <= thr:
        return v_hi, its
    lo, hi = 0.0, 1.0
    for _ in range(200):
        t = 0.5 * (lo + hi)
        if rho_of((1.0 - t) * v_hi + t * v_lo) <= thr:
            lo = t
        else:
            hi = t
        its += 1
        if hi - lo <= 1e-16:
            break
    return (1.0 - lo) * v_hi + lo * v_lo, its


def orlicz_norm(pair, f, with_bounds=False):
    """``sup{ |integral f v| : rho_Psi(v) <= Phi(1) }`` via its explicit maximiser."""
    a = np.abs(f.values).ravel()
    w = f.weights.ravel()
    if not a.any():
        res = NormResult(0.0, "closed-form", 0.0, 0)
        return (res, (0.0, 0.0)) if with_bounds else res
    try:
        v, its = _orlicz_extremal(pair, a, w)
    except OverflowError as exc:
        raise NonFiniteModular(str(exc)) from None
    value = float(np.sum(w * a * v))
    res = NormResult(value, "bisection", 1e-14 * value, int(its))
    if not with_bounds:
        return res
    n = luxemburg(pair.phi, f).value
    return res, (pair.phi.eval(1.0) * n, 2.0 * n)


def orlicz_norm_amemiya(pair, f, k_lo=1e-8, k_hi=1e8):
    """``inf_k (Phi(1) + rho_Phi(k f)) / k`` by golden-section search in ``log k``."""
    a = np.abs(f.values).ravel()
    w = f.weights.ravel()
    if not a.any():
        return 0.0
    c = pair.phi.eval(1.0)
    top = float(a.max())

    def obj(t):
        k = math.exp(t) / top
        return (c + _weighted_modular(pair.phi, a, w, 1.0 / k)) / k

    ts = np.linspace(math.log(k_lo), math.log(k_hi), 161)
    vals = [obj(t) for t in ts]
    i = int(np.argmin(vals))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, ts.size - 1)]
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = obj(x1), obj(x2)
    while hi - lo > 1e-12:
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = obj(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = obj(x2)
    return min(f1, f2, min(vals))


# --------------------------------------------------------------------------
# coefficient side


@dataclass(frozen=True, eq=False)
class DualProfile:
    """``F(pi) = k^-1/2 ||sigma(pi)||_HS`` with the dimensions of each ``pi``."""

    reps: tuple
    values: np.ndarray
    d: np.ndarray
    k: np.ndarray

    @property
    def weights(self):
        return self.d * self.k


def profile(sigma):
    reps = tuple(sigma.reps)
    hs = np.array([np.linalg.norm(b) for _, b in sigma.items()], dtype=float)
    d = np.array([r.d for r in reps], dtype=float)
    k = np.array([r.k for r in reps], dtype=float)
    return DualProfile(reps, hs / np.sqrt(k) if reps else hs, d, k)


def _check_p(p):
    p = float(p)
    if not p >= 1.0:
        raise BadExponent(f"p must be >= 1, got {p}")
    return p


def _power_sum(weights, values, p):
    """``(sum w v^p)^(1/p)`` with the largest value factored out."""
    top = float(values.max()) if values.size else 0.0
    if top == 0:
        return 0.0
    return top * float(np.sum(weights * (values / top) ** p)) ** (1.0 / p)


def dual_lp(sigma, p):
    """``(sum d k^(p(1/p - 1/2)) ||sigma||_HS^p)^(1/p)``; ``sup k^-1/2 ||sigma||_HS`` at ``p = inf``."""
    p = _check_p(p)
    pr = profile(sigma)
    if math.isinf(p):
        return float(pr.values.max()) if pr.values.size else 0.0
    # d k^(1 - p/2) HS^p == d k F^p with F = k^-1/2 HS
    return _power_sum(pr.d * pr.k, pr.values, p)


def singular_values(block, k, floor=1e-13):
    """Singular values of the top ``k`` rows from the ``k x k`` Gram eigenproblem."""
    A = block[:k]
    ev = np.linalg.eigvalsh(A @ A.conj().T)
    top = float(ev.max()) if ev.size else 0.0
    ev = np.where(ev > floor * top, ev, 0.0)
    return np.sqrt(ev)


def dual_schatten(sigma, p):
    """``(sum d ||sigma(pi)||_{S^p}^p)^(1/p)``; ``sup ||sigma(pi)||_op`` at ``p = inf``."""
    p = _check_p(p)
    if not len(sigma):
        return 0.0
    svals = [singular_values(b, r.k) for r, b in sigma.items()]
    if math.isinf(p):
        return float(max(s.max() for s in svals))
    norms = np.array([_power_sum(np.ones_like(s), s, p) for s in svals])
    d = np.array([r.d for r in sigma.reps], dtype=float)
    return _power_sum(d, norms, p)


def dual_orlicz(phi, sigma, classical=False, rtol=1e-14):
    """``inf{lam : sum Phi(F(pi)/lam) k d <= Phi(1)}`` for the profile ``F`` of ``sigma``."""
    pr = sigma if isinstance(sigma, DualProfile) else profile(sigma)
    return _weighted_gauge(phi, pr.values, pr.weights, threshold(phi, classical), rtol)


# --------------------------------------------------------------------------


def norm_from_spec(spec):
    """Parse ``lux:<young>``, ``orlicz:<young>``, ``dual-lp:p``, ``dual-sch:p``, ``dual-orlicz:<young>``.

    Returns a callable taking a SampledFunction (function side) or
    SpectralCoefficients (coefficient side) and returning a float.
    """
    kind, _, rest = str(spec).partition(":")
    if kind == "lux":
        phi = from_spec(rest)
        return lambda f: luxemburg(phi, f).value
    if kind == "orlicz":
        pair = pair_from_spec(rest)
        return lambda f: orlicz_norm(pair, f).value
    if kind == "lp":
        p = float(rest)
        return lambda f: lp_norm(f, p)
    if kind == "dual-lp":
        p = float(rest)
        return lambda s: dual_lp(s, p)
    if kind == "dual-sch":
        p = float(rest)
        return lambda s: dual_schatten(s, p)
    if kind == "dual-orlicz":
        phi = from_spec(rest)
        return lambda s: dual_orlicz(phi, s).value
    raise UnknownSpec(f"unknown norm spec {spec!r}")


def check_gauge_equality(phi, f_or_sigma, value, classical=False):
    """``rho(f / N) - threshold``; zero for continuous ``Phi`` at the gauge value."""
    if value == 0:
        raise BadParam("gauge equality is undefined for the zero function")
    thr = threshold(phi, classical)
    if hasattr(f_or_sigma, "values") and hasattr(f_or_sigma, "quad"):
        rho = _weighted_modular(phi, np.abs(f_or_sigma.values).ravel(), f_or_sigma.weights.ravel(), value)
    else:
        pr = f_or_sigma if isinstance(f_or_sigma, DualProfile) else profile(f_or_sigma)
        rho = _weighted_modular(phi, pr.values, pr.weights, value)
    return rho - thr

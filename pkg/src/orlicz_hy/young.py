"""Young functions and their calculus.

A Young function is a convex ``Phi: [0, inf) -> [0, inf]`` with ``Phi(0) = 0``
and ``Phi(x) -> inf``.  Built-in families are evaluated by the compiled kernels
(see :mod:`orlicz_hy.kernels`); arbitrary callables are accepted as well and go
through the slower generic paths below.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import BadParam, BracketOverflow, NoRoot, NonConvexInput, UnknownSpec

X_CAP = 1e300
GOLDEN_CAP = 1e12
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class KernelSpec:
    """Address of a built-in family inside the kernel backend."""

    kind: int
    params: tuple
    scale: float = 1.0
    conj: bool = False


@dataclass(frozen=True, eq=False)
class YoungFunction:
    """An evaluable Young function with right-derivative access.

    Either ``kernel`` or ``eval_fn``/``deriv_fn`` must be given.  Inputs are
    nonnegative reals (scalars or arrays); outputs may be ``+inf``.
    """

    label: str
    eval_fn: Optional[Callable] = None
    deriv_fn: Optional[Callable] = None
    domain_hint: Optional[float] = None
    kernel: Optional[KernelSpec] = None
    closed_conjugate: Optional[Callable[[], "YoungFunction"]] = field(default=None, repr=False)
    growth_c0: Optional[float] = None
    growth_p: Optional[float] = None

    def eval(self, x):
        xa = np.asarray(x, dtype=float)
        k = self.kernel
        if k is not None:
            out = kernels.family_eval(k.kind, k.params, k.scale, k.conj, xa)
        else:
            with np.errstate(over="ignore", invalid="ignore"):
                out = np.asarray(self.eval_fn(xa), dtype=float)
        if self.domain_hint is not None:
            out = np.where(xa > self.domain_hint, np.inf, out)
        return out if xa.ndim else float(out)

    __call__ = eval

    def deriv(self, x):
        xa = np.asarray(x, dtype=float)
        k = self.kernel
        if k is not None:
            out = kernels.family_deriv(k.kind, k.params, k.scale, k.conj, xa)
        elif self.deriv_fn is not None:
            with np.errstate(over="ignore", invalid="ignore"):
                out = np.asarray(self.deriv_fn(xa), dtype=float)
        else:
            out = _numeric_right_derivative(self, xa)
        if self.domain_hint is not None:
            out = np.where(xa >= self.domain_hint, np.inf, out)
        return out if xa.ndim else float(out)

    @property
    def has_derivative(self):
        return self.kernel is not None or self.deriv_fn is not None

    def inverse(self, y):
        """Smallest ``x`` with ``Phi(x) >= y`` (the generalised inverse)."""
        ya = np.asarray(y, dtype=float)
        out = _solve_increasing(self.eval, ya)
        return out if ya.ndim else float(out)

    def with_growth(self, c0, p):
        return replace(self, growth_c0=float(c0), growth_p=float(p))

    def __repr__(self):
        return f"YoungFunction({self.label!r})"


def _numeric_right_derivative(phi, x):
    h = 1e-7 * np.maximum(1.0, x)
    return (phi.eval(x + h) - phi.eval(x)) / h


def _solve_increasing(fn, targets, x_max=X_CAP, x_min=1e-300, rtol=1e-15, maxit=200):
    """Vectorised geometric bisection for ``inf{x > 0: fn(x) >= target}``.

    ``fn`` must be nondecreasing.  Targets <= 0 give 0; targets never reached
    below ``x_max`` give ``+inf``.
    """
    t = np.asarray(targets, dtype=float).reshape(-1)
    out = np.zeros_like(t)
    act = np.nonzero(t > 0)[0]
    if act.size == 0:
        return out.reshape(np.shape(targets))
    y = t[act]
    lo = np.ones_like(y)
    hi = np.ones_like(y)
    f1 = np.asarray(fn(lo), dtype=float)
    need_up = ~(f1 >= y)
    need_dn = ~need_up
    factor = 2.0
    while need_up.any() or need_dn.any():
        if need_up.any():
            idx = np.nonzero(need_up)[0]
            lo[idx] = hi[idx]
            hi[idx] = np.minimum(hi[idx] * factor, x_max)
            ok = np.asarray(fn(hi[idx]), dtype=float) >= y[idx]
            capped = ~ok & (hi[idx] >= x_max)
            hi[idx[capped]] = np.inf
            need_up[idx[ok | capped]] = False
        if need_dn.any():
            idx = np.nonzero(need_dn)[0]
            hi[idx] = lo[idx]
            lo[idx] = np.maximum(lo[idx] / factor, x_min)
            ok = ~(np.asarray(fn(lo[idx]), dtype=float) >= y[idx])
            floored = ~ok & (lo[idx] <= x_min)
            lo[idx[floored]] = 0.0
            hi[idx[floored]] = 0.0
            need_dn[idx[ok | floored]] = False
        factor = min(factor * factor, 1e16)
    live = np.nonzero(np.isfinite(hi) & (hi > 0) & (lo > 0))[0]
    for _ in range(maxit):
        if live.size == 0:
            break
        mid = np.sqrt(lo[live] * hi[live])
        ok = np.asarray(fn(mid), dtype=float) >= y[live]
        hi[live[ok]] = mid[ok]
        lo[live[~ok]] = mid[~ok]
        live = live[hi[live] > lo[live] * (1.0 + rtol)]
    out[act] = hi
    return out.reshape(np.shape(targets))


# --------------------------------------------------------------------------
# convexity sampling


DEFAULT_CONVEXITY_GRID = np.concatenate([[0.0], np.logspace(-6, 6, 241)])


def convexity_violations(phi, grid=None, rtol=1e-9, atol=1e-12):
    """Midpoint-convexity defects on sampled pairs ``a < b``.

    Returns a list of ``(a, b, defect)`` for which
    ``Phi((a+b)/2) > (Phi(a) + Phi(b))/2`` beyond tolerance.
    """
    g = DEFAULT_CONVEXITY_GRID if grid is None else np.sort(np.asarray(grid, dtype=float))
    vals = phi.eval(g)
    bad = []
    for k in (1, 2, 5, 20):
        if k >= g.size:
            continue
        a, b = g[:-k], g[k:]
        fa, fb = vals[:-k], vals[k:]
        fin = np.isfinite(fa) & np.isfinite(fb)
        mid = phi.eval(0.5 * (a[fin] + b[fin]))
        rhs = 0.5 * (fa[fin] + fb[fin])
        defect = mid - rhs
        viol = defect > rtol * np.abs(rhs) + atol
        for i in np.nonzero(viol)[0]:
            bad.append((float(a[fin][i]), float(b[fin][i]), float(defect[i])))
    return bad


def check_convexity(phi, grid=None):
    bad = convexity_violations(phi, grid)
    if bad:
        a, b, d = bad[0]
        raise NonConvexInput(f"{phi.label} fails midpoint convexity on [{a:g}, {b:g}] by {d:g}")


# --------------------------------------------------------------------------
# conjugation


def conjugate(phi, method="auto"):
    """Complementary function ``Psi(y) = sup_x (x y - Phi(x))``.

    ``method`` is ``"auto"`` (closed form when known, else numeric),
    ``"closed"`` or ``"numeric"``.
    """
    if method not in ("auto", "closed", "numeric"):
        raise BadParam(f"unknown conjugation method {method!r}")
    if method != "numeric" and phi.closed_conjugate is not None:
        return phi.closed_conjugate()
    if method == "closed":
        raise BadParam(f"{phi.label} has no closed-form conjugate")
    check_convexity(phi)
    k = phi.kernel
    if k is not None and not k.conj:
        return YoungFunction(
            label=f"conj({phi.label})",
            kernel=KernelSpec(k.kind, k.params, 1.0 / k.scale, True),
            closed_conjugate=lambda: phi,
        )

    def argmax(y):
        if phi.has_derivative:
            return _solve_increasing(phi.deriv, y)
        return _golden_argmax(phi, y)

    def ev(y):
        y = np.asarray(y, dtype=float)
        x = argmax(y)
        with np.errstate(invalid="ignore"):
            out = x * y - phi.eval(np.where(np.isfinite(x), x, 0.0))
        out = np.where(np.isfinite(x), out, np.inf)
        out = np.where(y == 0, 0.0, out)
        return np.maximum(out, 0.0)

    return YoungFunction(
        label=f"conj({phi.label})",
        eval_fn=ev,
        deriv_fn=argmax,
        closed_conjugate=lambda: phi,
    )


def _golden_argmax(phi, y):
    """Maximise ``x*y - Phi(x)`` per entry by golden-section search."""
    ys = np.asarray(y, dtype=float).reshape(-1)
    out = np.zeros_like(ys)
    for i, yi in enumerate(ys):
        if yi <= 0:
            continue

        def obj(x):
            return x * yi - phi.eval(x)

        b = 1.0
        while obj(2.0 * b) > obj(b):
            b *= 2.0
            if b > GOLDEN_CAP:
                raise BracketOverflow(f"conjugate of {phi.label} at {yi:g} has no maximiser below {GOLDEN_CAP:g}")
        lo, hi = 0.0, 2.0 * b
        c = hi - INV_PHI * (hi - lo)
        d = lo + INV_PHI * (hi - lo)
        fc, fd = obj(c), obj(d)
        while hi - lo > 1e-13 * max(1.0, hi):
            if fc > fd:
                hi, d, fd = d, c, fc
                c = hi - INV_PHI * (hi - lo)
                fc = obj(c)
            else:
                lo, c, fc = c, d, fd
                d = lo + INV_PHI * (hi - lo)
                fd = obj(d)
        out[i] = 0.5 * (lo + hi)
    return out.reshape(np.shape(y))


def scaled(phi, s):
    """The Young function ``x -> Phi(s x)``."""
    s = float(s)
    if s == 1.0:
        return phi
    closed = None
    if phi.closed_conjugate is not None:
        base = phi.closed_conjugate

        def closed():
            return scaled(base(), 1.0 / s)

    label = f"{phi.label}[x*{s:.12g}]"
    k = phi.kernel
    if k is not None:
        return YoungFunction(
            label=label,
            kernel=KernelSpec(k.kind, k.params, k.scale * s, k.conj),
            closed_conjugate=closed,
        )
    return YoungFunction(
        label=label,
        eval_fn=lambda x: phi.eval(s * np.asarray(x, dtype=float)),
        deriv_fn=(lambda x: s * phi.deriv(s * np.asarray(x, dtype=float))) if phi.has_derivative else None,
        domain_hint=None if phi.domain_hint is None else phi.domain_hint / s,
        closed_conjugate=closed,
    )


# --------------------------------------------------------------------------
# pairs


@dataclass(frozen=True, eq=False)
class ComplementaryPair:
    phi: YoungFunction
    psi: YoungFunction
    normalized: bool
    scale: float = 1.0
    label: str = ""

    def young_gap(self, x, y):
        """``Phi(x) + Psi(y) - x y``; nonnegative for a complementary pair."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.phi.eval(x) + self.psi.eval(y) - x * y

    @property
    def normalization_defect(self):
        return abs(self.phi.eval(1.0) + self.psi.eval(1.0) - 1.0)


def make_pair(phi, psi=None, tol=1e-10, label=None):
    psi = conjugate(phi) if psi is None else psi
    defect = abs(phi.eval(1.0) + psi.eval(1.0) - 1.0)
    return ComplementaryPair(phi, psi, defect <= tol, 1.0, label or phi.label)


def normalize_pair(phi, tol=1e-10, s_min=1e-12, s_max=1e12):
    """Rescale ``Phi`` so that ``Phi_s(1) + Psi_s(1) = 1``.

    Young's inequality gives ``Phi(s) + Psi(1/s) >= 1`` with equality exactly
    when ``1/s`` is a subgradient of ``Phi`` at ``s``, so the scale is found by
    bisecting the increasing function ``s * Phi'(s) - 1``.
    """

    def h(s):
        return s * phi.deriv(s) - 1.0

    h1 = h(1.0)
    if h1 == 0.0:
        s = 1.0
    else:
        lo = hi = 1.0
        if h1 < 0:
            while h(hi) < 0:
                lo, hi = hi, hi * 2.0
                if hi > s_max:
                    raise NoRoot(f"{phi.label}: s*Phi'(s) stays below 1 up to {s_max:g}")
        else:
            while h(lo) >= 0:
                lo, hi = lo / 2.0, lo
                if lo < s_min:
                    raise NoRoot(f"{phi.label}: s*Phi'(s) stays above 1 down to {s_min:g}")
        for _ in range(200):
            mid = math.sqrt(lo * hi)
            if not lo < mid < hi:
                break
            if h(mid) >= 0:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 1e-16 * hi:
                break
        s = hi
    phi_s = scaled(phi, s)
    psi_s = conjugate(phi_s)
    defect = abs(phi_s.eval(1.0) + psi_s.eval(1.0) - 1.0)
    if not math.isfinite(defect):
        raise NoRoot(f"{phi.label}: normalisation defect is not finite")
    return ComplementaryPair(phi_s, psi_s, defect <= tol, s, phi.label)


# --------------------------------------------------------------------------
# Delta_2 and ordering


def check_delta2(phi, x_grid=None):
    """Smallest sampled ``C`` with ``Phi(2x) <= C Phi(x)`` on the grid.

    Returns ``(C, x0)`` or ``None`` when the ratio grows without bound over
    the grid (monotone increase through the final decade, or overflow).
    """
    g = np.geomspace(1.0, 1e3, 601) if x_grid is None else np.asarray(x_grid, dtype=float)
    fx = phi.eval(g)
    pos = np.nonzero(fx > 0)[0]
    if pos.size == 0:
        return None
    g = g[pos[0]:]
    fx = fx[pos[0]:]
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        ratio = phi.eval(2.0 * g) / fx
    if not np.all(np.isfinite(ratio)):
        return None
    tail = ratio[g >= g[-1] / 10.0]
    if tail.size >= 2 and np.all(np.diff(tail) >= 0) and tail[-1] > tail[0] * (1.0 + 1e-3):
        return None
    return float(ratio.max()), float(g[0])


@dataclass(frozen=True)
class OrderingWitness:
    """Constants for ``Phi1(a x) <= b Phi2(x)`` (x >= x0), ``Phi2(c x) <= d Phi1(x)`` (x <= x1)."""

    a: float
    b: float
    c: float
    d: float
    x0: float
    x1: float

    def violations(self, phi1, phi2, grid):
        g = np.asarray(grid, dtype=float)
        big = g[g >= self.x0]
        small = g[(g > 0) & (g <= self.x1)]
        v1 = ~_leq(phi1.eval(self.a * big), self.b * phi2.eval(big))
        v2 = ~_leq(phi2.eval(self.c * small), self.d * phi1.eval(small))
        return int(v1.sum() + v2.sum())


def _leq(lhs, rhs, rtol=1e-12):
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    with np.errstate(invalid="ignore"):
        return (lhs <= rhs * (1.0 + rtol) + 1e-300) | ((lhs == np.inf) & (rhs == np.inf))


ORDER_GRID = 10.0 ** np.linspace(-8, 8, 161)
ORDER_FINE_GRID = 10.0 ** np.linspace(-8, 8, 1601)


def _threshold_above(ok, grid):
    """Smallest grid x such that ``ok`` holds at every grid point >= x."""
    if not ok[-1]:
        return None
    bad = np.nonzero(~ok)[0]
    return float(grid[0] if bad.size == 0 else grid[bad[-1] + 1])


def _threshold_below(ok, grid):
    if not ok[0]:
        return None
    bad = np.nonzero(~ok)[0]
    return float(grid[-1] if bad.size == 0 else grid[bad[0] - 1])


def check_order(phi1, phi2, grid=None, fine_grid=None, max_power=10, x0_max=1e4, x1_min=1e-4):
    """Search for a witness of ``Phi1 < Phi2`` (the partial order on Young functions).

    Constants are searched over powers of two, preferring the smallest total
    exponent; thresholds are the tightest coarse-grid values.  A witness is
    returned only if it also holds on the fine grid.
    """
    g = ORDER_GRID if grid is None else np.asarray(grid, dtype=float)
    fine = ORDER_FINE_GRID if fine_grid is None else np.asarray(fine_grid, dtype=float)
    f1 = phi1.eval(g)
    f2 = phi2.eval(g)
    cands = sorted(
        ((i, j) for i in range(max_power + 1) for j in range(max_power + 1)),
        key=lambda ij: (ij[0] + ij[1], ij[0]),
    )

    large = None
    for i, j in cands:
        a, b = 2.0 ** -i, 2.0 ** j
        x0 = _threshold_above(_leq(phi1.eval(a * g), b * f2), g)
        if x0 is None or x0 > x0_max:
            continue
        big = fine[fine >= x0]
        if _leq(phi1.eval(a * big), b * phi2.eval(big)).all():
            large = (a, b, x0)
            break
    if large is None:
        return None

    small = None
    for i, j in cands:
        c, d = 2.0 ** -i, 2.0 ** j
        x1 = _threshold_below(_leq(phi2.eval(c * g), d * f1), g)
        if x1 is None or x1 < x1_min:
            continue
        sm = fine[fine <= x1]
        if _leq(phi2.eval(c * sm), d * phi1.eval(sm)).all():
            small = (c, d, x1)
            break
    if small is None:
        return None
    return OrderingWitness(large[0], large[1], small[0], small[1], large[2], small[2])


# --------------------------------------------------------------------------
# built-in families


def _power(p):
    p = float(p)
    if not p >= 1.0:
        raise BadParam(f"power requires p >= 1, got {p}")
    if p == 1.0:

        def closed():
            return YoungFunction(
                label="conj(power:1)",
                eval_fn=lambda y: np.zeros_like(np.asarray(y, dtype=float)),
                deriv_fn=lambda y: np.zeros_like(np.asarray(y, dtype=float)),
                domain_hint=1.0,
            )

    else:
        q = p / (p - 1.0)

        def closed():
            return YoungFunction(
                label=f"power:{q:.12g}",
                kernel=KernelSpec(kernels.POWER, (q,)),
                closed_conjugate=lambda: _power(p),
            )

    return YoungFunction(
        label=f"power:{p:.12g}", kernel=KernelSpec(kernels.POWER, (p,)), closed_conjugate=closed
    )


def _exp_minus():
    def closed():
        return YoungFunction(
            label="conj(exp)", kernel=KernelSpec(kernels.EXP_CONJ, ()), closed_conjugate=_exp_minus
        )

    return YoungFunction(label="exp", kernel=KernelSpec(kernels.EXP, ()), closed_conjugate=closed)


def _cosh_minus():
    def closed():
        return YoungFunction(
            label="conj(cosh)", kernel=KernelSpec(kernels.COSH_CONJ, ()), closed_conjugate=_cosh_minus
        )

    return YoungFunction(label="cosh", kernel=KernelSpec(kernels.COSH, ()), closed_conjugate=closed)


def _xp_log(p):
    p = float(p)
    if not p >= 1.0:
        raise BadParam(f"xplog requires p >= 1, got {p}")
    phi = YoungFunction(label=f"xplog:{p:.12g}", kernel=KernelSpec(kernels.XPLOG, (p,)))
    # 0 on [0, 1] joined to x^p log x: the right slope at 1 is 1 > 0, so the
    # join is already convex; confirm by sampling instead of assuming it
    check_convexity(phi)
    return phi


def _increasing(values):
    return bool(np.all(np.diff(values) >= 0))


def loglog_params(r, e):
    """Thresholds and chord for ``x^r/r * L(x)^e`` joined across the middle.

    ``L(x) = log x log log x`` above ``x0`` and ``log(1/x) log log(1/x)`` below
    ``x1``.  ``x0`` starts at the smallest power of two >= e^2 and ``x1`` at
    the largest power of two <= e^-2; each moves outward until the derivative
    is increasing on its branch and the chord slope lies between the one-sided
    derivatives at the join points.
    """
    upper_prm = (r, e, 0.0, 0.0, 0.0, 0.0, 0.0)
    lower_prm = (r, e, math.inf, math.inf, 0.0, 0.0, 0.0)

    def up(x, d=False):
        f = kernels.family_deriv if d else kernels.family_eval
        return f(kernels.LOGLOG, upper_prm, 1.0, False, np.asarray(x, dtype=float))

    def low(x, d=False):
        f = kernels.family_deriv if d else kernels.family_eval
        return f(kernels.LOGLOG, lower_prm, 1.0, False, np.asarray(x, dtype=float))

    x0 = 2.0 ** math.ceil(math.log2(math.exp(2.0)))
    x1 = 2.0 ** math.floor(math.log2(math.exp(-2.0)))
    for _ in range(200):
        if not _increasing(up(np.geomspace(x0, 4 * x0, 64), True)):
            x0 *= 2.0
            continue
        if not _increasing(up(np.geomspace(x0, 1e12, 400), True)):
            x0 *= 2.0
            continue
        break
    for _ in range(200):
        if not _increasing(low(np.geomspace(x1 / 4, x1, 64), True)):
            x1 /= 2.0
            continue
        if not _increasing(low(np.geomspace(1e-250, x1, 800), True)):
            x1 /= 2.0
            continue
        break
    for _ in range(200):
        y0 = float(up(x0))
        y1 = float(low(x1))
        m = (y0 - y1) / (x0 - x1)
        if float(low(x1, True)) <= m <= float(up(x0, True)):
            return (r, e, x0, x1, y0, y1, m)
        x0 *= 2.0
        x1 /= 2.0
    raise BadParam(f"no convex chord join found for r={r}, e={e}")


def _riordan(p):
    p = float(p)
    if not 1.0 < p < 2.0:
        raise BadParam(f"riordan requires 1 < p < 2, got {p}")
    prm = loglog_params(p, 1.0)
    return YoungFunction(label=f"riordan:{p:.12g}", kernel=KernelSpec(kernels.LOGLOG, prm))


def _riordan_psi(p):
    """The closed-form companion ``x^q/q L(x)^(q/p)`` (equivalent to, not equal to, the conjugate)."""
    p = float(p)
    if not 1.0 < p < 2.0:
        raise BadParam(f"riordan-psi requires 1 < p < 2, got {p}")
    q = p / (p - 1.0)
    prm = loglog_params(q, q / p)
    return YoungFunction(label=f"riordan-psi:{p:.12g}", kernel=KernelSpec(kernels.LOGLOG, prm))


BUILTINS = {
    "power": (_power, 1),
    "exp_minus": (_exp_minus, 0),
    "cosh_minus": (_cosh_minus, 0),
    "xp_log": (_xp_log, 1),
    "riordan": (_riordan, 1),
    "riordan_psi": (_riordan_psi, 1),
}

ALIASES = {
    "exp": "exp_minus",
    "cosh": "cosh_minus",
    "xplog": "xp_log",
    "riordan-psi": "riordan_psi",
}

LISTED = ["cosh", "exp", "phi0", "power:1.5", "power:2", "riordan-psi:1.5", "riordan:1.5", "xplog:1.5"]


def builtin(name, *params):
    """Construct a named Young function, e.g. ``builtin("riordan", 1.5)``."""
    key = ALIASES.get(name, name)
    if key == "phi0":
        return _power(2.0)
    if key not in BUILTINS:
        raise UnknownSpec(f"unknown Young function {name!r}")
    factory, nparams = BUILTINS[key]
    if len(params) != nparams:
        raise BadParam(f"{name} takes {nparams} parameter(s), got {len(params)}")
    return factory(*params)


def from_spec(spec):
    """Parse ``"name"`` or ``"name:param"`` (e.g. ``"power:1.5"``)."""
    if isinstance(spec, YoungFunction):
        return spec
    name, _, rest = str(spec).partition(":")
    params = [float(v) for v in rest.split(",")] if rest else []
    return builtin(name.strip(), *params)


def pair_from_spec(spec):
    """Normalised complementary pair generated by the named Young function."""
    phi = from_spec(spec)
    pair = normalize_pair(phi)
    return replace(pair, label=str(spec))

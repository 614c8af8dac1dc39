"""Pure numpy implementation of the numerical kernels.

This module mirrors ``_ckernels.pyx`` function for function.  It is used when
the compiled extension is unavailable, or when ``ORLICZ_HY_PURE_PYTHON`` is set.

Family codes and parameter layouts
----------------------------------
POWER      [p]                      x**p / p
EXP        []                       exp(x) - x - 1
EXP_CONJ   []                       (1 + y) log(1 + y) - y
COSH       []                       cosh(x) - 1
COSH_CONJ  []                       y asinh(y) - sqrt(1 + y**2) + 1
XPLOG      [p]                      0 on [0, 1], x**p log(x) beyond
LOGLOG     [r, e, x0, x1, y0, y1, m]
           x**r / r * (log x log log x)**e          for x >= x0
           x**r / r * (log 1/x log log 1/x)**e      for x <= x1
           y1 + m (x - x1)                          in between

A kernel function is addressed by ``(kind, params, scale, conj)``; it evaluates
``F(scale * x)`` where ``F`` is the family member or, with ``conj`` set, its
numerically computed Legendre transform.
"""

import math

import numpy as np

NAME = "python"

POWER, EXP, EXP_CONJ, COSH, COSH_CONJ, XPLOG, LOGLOG = range(7)

# log-space bracket limits for inverting the derivative
T_MIN = -690.0
T_MAX = 690.0
MAXIT = 200


def _base_eval(kind, prm, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if kind == POWER:
            return x ** prm[0] / prm[0]
        if kind == EXP:
            return np.expm1(x) - x
        if kind == EXP_CONJ:
            return (1.0 + x) * np.log1p(x) - x
        if kind == COSH:
            s = np.sinh(0.5 * x)
            return 2.0 * s * s
        if kind == COSH_CONJ:
            return x * np.arcsinh(x) - x * x / (np.sqrt(1.0 + x * x) + 1.0)
        if kind == XPLOG:
            out = np.zeros_like(x)
            hi = x > 1.0
            out[hi] = x[hi] ** prm[0] * np.log(x[hi])
            return out
        if kind == LOGLOG:
            r, e, x0, x1, y0, y1, m = prm[:7]
            out = y1 + m * (x - x1)
            up = x >= x0
            xu = x[up]
            v = np.log(xu)
            out[up] = xu ** r / r * (v * np.log(v)) ** e
            lo = x <= x1
            xl = x[lo]
            pos = xl > 0
            u = -np.log(xl[pos])
            vals = np.zeros_like(xl)
            vals[pos] = xl[pos] ** r / r * (u * np.log(u)) ** e
            out[lo] = vals
            return out
    raise ValueError(f"unknown kernel family {kind}")


def _base_deriv(kind, prm, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if kind == POWER:
            p = prm[0]
            if p == 1.0:
                return np.ones_like(x)
            return x ** (p - 1.0)
        if kind == EXP:
            return np.expm1(x)
        if kind == EXP_CONJ:
            return np.log1p(x)
        if kind == COSH:
            return np.sinh(x)
        if kind == COSH_CONJ:
            return np.arcsinh(x)
        if kind == XPLOG:
            p = prm[0]
            out = np.zeros_like(x)
            hi = x >= 1.0
            xh = x[hi]
            out[hi] = xh ** (p - 1.0) * (p * np.log(xh) + 1.0)
            return out
        if kind == LOGLOG:
            r, e, x0, x1, y0, y1, m = prm[:7]
            out = np.full_like(x, m)
            up = x >= x0
            xu = x[up]
            v = np.log(xu)
            lv = np.log(v)
            big = v * lv
            out[up] = xu ** (r - 1.0) * big ** (e - 1.0) * (big + (e / r) * (lv + 1.0))
            lo = x < x1
            xl = x[lo]
            pos = xl > 0
            u = -np.log(xl[pos])
            lu = np.log(u)
            small = u * lu
            vals = np.zeros_like(xl)
            vals[pos] = xl[pos] ** (r - 1.0) * small ** (e - 1.0) * (small - (e / r) * (lu + 1.0))
            out[lo] = vals
            return out
    raise ValueError(f"unknown kernel family {kind}")


def _lower_deriv(prm, x):
    """Derivative of the small-x LOGLOG branch (the left derivative at the join)."""
    r, e = prm[0], prm[1]
    u = -math.log(x)
    lu = math.log(u)
    small = u * lu
    return x ** (r - 1.0) * small ** (e - 1.0) * (small - (e / r) * (lu + 1.0))


def _conj_solve(kind, prm, y):
    """Return the smallest maximiser x of x*y - F(x) for each y >= 0.

    Solves F'(x) = y in log x by a bracketed Illinois iteration.  Entries whose
    maximiser lies beyond exp(T_MAX) come back as +inf.
    """
    y = np.asarray(y, dtype=float)
    x_out = np.zeros_like(y)
    act = np.nonzero(y > 0)[0]
    if act.size == 0:
        return x_out
    yv = y[act]
    ly = np.log(yv)

    def h(t):
        with np.errstate(divide="ignore", over="ignore"):
            d = _base_deriv(kind, prm, np.exp(t))
            return np.log(d) - ly_cur

    # bracket: a has h < 0, b has h >= 0
    ly_cur = ly
    t0 = np.zeros_like(yv)
    fixed = np.full_like(yv, np.nan)
    if kind == XPLOG:
        fixed[yv <= 1.0] = 1.0
    elif kind == LOGLOG:
        # the derivative jumps at both ends of the chord; answer those
        # values directly and start the search on the right branch
        x0, x1, m = prm[2], prm[3], prm[6]
        d0 = float(_base_deriv(kind, prm, np.array([x0]))[0])
        up = yv > m
        fixed[up & (yv <= d0)] = x0
        t0[up] = math.log(x0)
        if x1 > 0:
            d1 = float(_lower_deriv(prm, x1))
            fixed[~up & (yv > d1)] = x1
            t0[~up] = math.log(x1)
    done = ~np.isnan(fixed)
    if done.any():
        x_out[act[done]] = fixed[done]
        keep = ~done
        act, yv, ly, t0 = act[keep], yv[keep], ly[keep], t0[keep]
        ly_cur = ly
        if act.size == 0:
            return x_out
    h0 = np.nan_to_num(h(t0), nan=np.inf)
    below = h0 < 0
    a = np.where(below, t0, np.nan)
    fa = np.where(below, h0, np.nan)
    b = np.where(below, np.nan, t0)
    fb = np.where(below, np.nan, h0)
    need_b = below.copy()
    need_a = ~below
    t_up = t0.copy()
    t_dn = t0.copy()
    step = 2.0
    while need_b.any() or need_a.any():
        if need_b.any():
            idx = np.nonzero(need_b)[0]
            t_up[idx] = np.minimum(t_up[idx] + step, T_MAX)
            ly_cur = ly[idx]
            hv = np.nan_to_num(h(t_up[idx]), nan=np.inf)
            ok = hv >= 0
            b[idx[ok]] = t_up[idx[ok]]
            fb[idx[ok]] = hv[ok]
            a[idx[~ok]] = t_up[idx[~ok]]
            fa[idx[~ok]] = hv[~ok]
            capped = (~ok) & (t_up[idx] >= T_MAX)
            b[idx[capped]] = np.inf
            need_b[idx[ok | capped]] = False
        if need_a.any():
            idx = np.nonzero(need_a)[0]
            t_dn[idx] = np.maximum(t_dn[idx] - step, T_MIN)
            ly_cur = ly[idx]
            hv = np.nan_to_num(h(t_dn[idx]), nan=np.inf)
            ok = hv < 0
            a[idx[ok]] = t_dn[idx[ok]]
            fa[idx[ok]] = hv[ok]
            b[idx[~ok]] = t_dn[idx[~ok]]
            fb[idx[~ok]] = hv[~ok]
            floored = (~ok) & (t_dn[idx] <= T_MIN)
            a[idx[floored]] = -np.inf
            need_a[idx[ok | floored]] = False
        step *= 2.0

    res = np.empty_like(yv)
    over = np.isinf(b)
    under = np.isinf(a) & ~over
    res[over] = np.inf
    res[under] = math.exp(T_MIN)
    live = np.nonzero(~(over | under))[0]
    if live.size:
        A, B = a[live], b[live]
        FA, FB = fa[live], fb[live]
        side = np.zeros(live.size, dtype=np.int8)
        slow = np.zeros(live.size, dtype=np.int8)
        lyl = ly[live]
        run = np.ones(live.size, dtype=bool)
        for _ in range(MAXIT):
            width = B - A
            run &= (width > 1e-15 * np.maximum(1.0, np.abs(B))) & (FB != 0)
            if not run.any():
                break
            r = np.nonzero(run)[0]
            a_, b_, fa_, fb_ = A[r], B[r], FA[r], FB[r]
            fin = np.isfinite(fa_) & np.isfinite(fb_) & (slow[r] < 2)
            with np.errstate(invalid="ignore", divide="ignore"):
                c = b_ - fb_ * (b_ - a_) / (fb_ - fa_)
            bad = ~fin | ~(c > a_) | ~(c < b_)
            c[bad] = 0.5 * (a_[bad] + b_[bad])
            slow[r[bad]] = 0
            ly_cur = lyl[r]
            fc = h(c)
            fc = np.where(np.isnan(fc), np.inf, fc)
            w_old = b_ - a_
            left = fc < 0
            # replace a
            ia = r[left]
            A[ia] = c[left]
            FA[ia] = fc[left]
            halve_b = side[ia] == -1
            FB[ia[halve_b]] *= 0.5
            side[ia] = -1
            ib = r[~left]
            B[ib] = c[~left]
            FB[ib] = fc[~left]
            halve_a = side[ib] == 1
            FA[ib[halve_a]] *= 0.5
            side[ib] = 1
            shrunk = (B[r] - A[r]) <= 0.5 * w_old
            slow[r] = np.where(shrunk, 0, slow[r] + 1)
        res[live] = np.exp(B)
    x_out[act] = res
    return x_out


def family_eval(kind, params, scale, conj, x):
    prm = np.asarray(params, dtype=float)
    z = scale * np.asarray(x, dtype=float)
    if not conj:
        return _base_eval(kind, prm, z)
    xs = _conj_solve(kind, prm, z)
    with np.errstate(invalid="ignore"):
        out = xs * z - _base_eval(kind, prm, xs)
    out[z == 0] = 0.0
    out[np.isinf(xs)] = np.inf
    return np.maximum(out, 0.0)


def family_deriv(kind, params, scale, conj, x):
    prm = np.asarray(params, dtype=float)
    z = scale * np.asarray(x, dtype=float)
    if not conj:
        return scale * _base_deriv(kind, prm, z)
    return scale * _conj_solve(kind, prm, z)


def conj_argmax(kind, params, y):
    """Maximiser of x*y - F(x) for the unscaled family member."""
    return _conj_solve(kind, np.asarray(params, dtype=float), np.asarray(y, dtype=float))


def modular(kind, params, scale, conj, values, weights, lam):
    vals = family_eval(kind, params, scale, conj, np.asarray(values, dtype=float) / lam)
    w = np.asarray(weights, dtype=float)
    used = w > 0
    if np.isinf(vals[used]).any() or np.isnan(vals[used]).any():
        return math.inf
    return float(np.sum(w * vals))


def _hval(rho, thr):
    if thr == 0.0:
        return math.inf if rho > 0.0 else -math.inf
    if rho == 0.0:
        return -math.inf
    if math.isinf(rho):
        return math.inf
    return math.log(rho) - math.log(thr)


def solve_gauge(rho_fn, vmax, thr, rtol=1e-14):
    """Smallest lambda with rho_fn(lambda) <= thr, rho_fn nonincreasing.

    Returns ``(lam, iterations, width)`` where ``width`` is the final relative
    bracket width.  ``lam`` satisfies the constraint.
    """
    if vmax <= 0.0:
        return 0.0, 0, 0.0
    its = 0
    tb = math.log(vmax)
    rb = rho_fn(math.exp(tb))
    its += 1
    step = 2.0
    while rb > thr:
        tb += step
        step *= 2.0
        rb = rho_fn(math.exp(tb))
        its += 1
        if tb > T_MAX:
            raise OverflowError("modular exceeds the threshold for every admissible scale")
    ta = tb - 2.0
    ra = rho_fn(math.exp(ta))
    its += 1
    step = 2.0
    while ra <= thr:
        tb, rb = ta, ra
        ta -= step
        step *= 2.0
        if ta < T_MIN:
            return 0.0, its, 0.0
        ra = rho_fn(math.exp(ta))
        its += 1
    # h decreasing in t: h(ta) > 0 >= h(tb)
    fa = _hval(ra, thr)
    fb = _hval(rb, thr)
    side = 0
    slow = 0
    for _ in range(MAXIT):
        if tb - ta <= rtol * max(1.0, abs(tb)) or fb == 0.0:
            break
        if math.isfinite(fa) and math.isfinite(fb) and slow < 2:
            c = tb - fb * (tb - ta) / (fb - fa)
            if not (ta < c < tb):
                c = 0.5 * (ta + tb)
                slow = 0
        else:
            c = 0.5 * (ta + tb)
            slow = 0
        if not (ta < c < tb):
            break
        rc = rho_fn(math.exp(c))
        its += 1
        fc = _hval(rc, thr)
        w_old = tb - ta
        if fc > 0.0:
            ta, fa = c, fc
            if side == 1:
                fb *= 0.5
            side = 1
        else:
            tb, fb = c, fc
            if side == -1:
                fa *= 0.5
            side = -1
        slow = 0 if (tb - ta) <= 0.5 * w_old else slow + 1
    return math.exp(tb), its, (0.0 if fb == 0.0 else tb - ta)


def gauge(kind, params, scale, conj, values, weights, threshold, rtol=1e-14):
    vals = np.ascontiguousarray(values, dtype=float)
    w = np.ascontiguousarray(weights, dtype=float)
    vmax = float(vals.max()) if vals.size else 0.0
    return solve_gauge(
        lambda lam: modular(kind, params, scale, conj, vals, w, lam), vmax, threshold, rtol
    )

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Same surface and family codes as ``_pykernels``; see that module for the
parameter layouts.  Every routine works on one scalar at a time, which is what
makes it fast on the short arrays used inside the ratio search.
"""

import numpy as np

from libc.math cimport (exp, expm1, log, log1p, pow, sinh, cosh, asinh, sqrt,
                        fabs, isfinite, isnan, INFINITY)

NAME = "cython"

cdef enum:
    POWER = 0
    EXP = 1
    EXP_CONJ = 2
    COSH = 3
    COSH_CONJ = 4
    XPLOG = 5
    LOGLOG = 6
    MAXIT = 200

cdef double T_MIN = -690.0
cdef double T_MAX = 690.0


cdef inline double base_eval(int kind, const double* prm, double x) noexcept nogil:
    cdef double s, v, u
    if kind == POWER:
        return pow(x, prm[0]) / prm[0]
    if kind == EXP:
        return expm1(x) - x
    if kind == EXP_CONJ:
        return (1.0 + x) * log1p(x) - x
    if kind == COSH:
        s = sinh(0.5 * x)
        return 2.0 * s * s
    if kind == COSH_CONJ:
        return x * asinh(x) - x * x / (sqrt(1.0 + x * x) + 1.0)
    if kind == XPLOG:
        if x > 1.0:
            return pow(x, prm[0]) * log(x)
        return 0.0
    if kind == LOGLOG:
        if x >= prm[2]:
            v = log(x)
            return pow(x, prm[0]) / prm[0] * pow(v * log(v), prm[1])
        if x <= prm[3]:
            if x <= 0.0:
                return 0.0
            u = -log(x)
            return pow(x, prm[0]) / prm[0] * pow(u * log(u), prm[1])
        return prm[5] + prm[6] * (x - prm[3])
    return INFINITY


cdef inline double base_deriv(int kind, const double* prm, double x) noexcept nogil:
    cdef double r, e, v, lv, big, u, lu, small
    if kind == POWER:
        if prm[0] == 1.0:
            return 1.0
        return pow(x, prm[0] - 1.0)
    if kind == EXP:
        return expm1(x)
    if kind == EXP_CONJ:
        return log1p(x)
    if kind == COSH:
        return sinh(x)
    if kind == COSH_CONJ:
        return asinh(x)
    if kind == XPLOG:
        if x >= 1.0:
            return pow(x, prm[0] - 1.0) * (prm[0] * log(x) + 1.0)
        return 0.0
    if kind == LOGLOG:
        r = prm[0]
        e = prm[1]
        if x >= prm[2]:
            v = log(x)
            lv = log(v)
            big = v * lv
            return pow(x, r - 1.0) * pow(big, e - 1.0) * (big + (e / r) * (lv + 1.0))
        if x < prm[3]:
            if x <= 0.0:
                return 0.0
            u = -log(x)
            lu = log(u)
            small = u * lu
            return pow(x, r - 1.0) * pow(small, e - 1.0) * (small - (e / r) * (lu + 1.0))
        return prm[6]
    return INFINITY


cdef inline double loglog_lower_deriv(const double* prm, double x) noexcept nogil:
    """Derivative of the small-x branch (the left derivative at the join)."""
    cdef double r = prm[0], e = prm[1], u, lu, small
    if x <= 0.0:
        return 0.0
    u = -log(x)
    lu = log(u)
    small = u * lu
    return pow(x, r - 1.0) * pow(small, e - 1.0) * (small - (e / r) * (lu + 1.0))


cdef inline double hlog(int kind, const double* prm, double t, double ly) noexcept nogil:
    cdef double d = base_deriv(kind, prm, exp(t))
    cdef double h
    if d <= 0.0:
        return -INFINITY
    h = log(d) - ly
    if isnan(h):
        return INFINITY
    return h


cdef double conj_solve(int kind, const double* prm, double y) noexcept nogil:
    """Smallest maximiser of x*y - F(x); +inf beyond exp(T_MAX)."""
    cdef double ly, a, b, fa, fb, c, fc, step, w_old, t
    cdef int side = 0, slow = 0, it
    if y <= 0.0:
        return 0.0
    ly = log(y)
    t = 0.0
    if kind == XPLOG and y <= 1.0:
        return 1.0
    if kind == LOGLOG:
        # the derivative jumps at both ends of the chord; answer those
        # values directly and start the search on the right branch
        if y > prm[6]:
            if y <= base_deriv(kind, prm, prm[2]):
                return prm[2]
            t = log(prm[2])
        elif prm[3] > 0.0:
            if y > loglog_lower_deriv(prm, prm[3]):
                return prm[3]
            t = log(prm[3])
    fc = hlog(kind, prm, t, ly)
    step = 2.0
    if fc < 0.0:
        a = t
        fa = fc
        while True:
            t = t + step
            if t > T_MAX:
                t = T_MAX
            fc = hlog(kind, prm, t, ly)
            if fc >= 0.0:
                b = t
                fb = fc
                break
            a = t
            fa = fc
            if t >= T_MAX:
                return INFINITY
            step *= 2.0
    else:
        b = t
        fb = fc
        while True:
            t = t - step
            if t < T_MIN:
                t = T_MIN
            fc = hlog(kind, prm, t, ly)
            if fc < 0.0:
                a = t
                fa = fc
                break
            b = t
            fb = fc
            if t <= T_MIN:
                return exp(T_MIN)
            step *= 2.0
    for it in range(MAXIT):
        if b - a <= 1e-15 * (fabs(b) if fabs(b) > 1.0 else 1.0) or fb == 0.0:
            break
        if isfinite(fa) and isfinite(fb) and slow < 2:
            c = b - fb * (b - a) / (fb - fa)
            if not (c > a and c < b):
                c = 0.5 * (a + b)
                slow = 0
        else:
            c = 0.5 * (a + b)
            slow = 0
        fc = hlog(kind, prm, c, ly)
        w_old = b - a
        if fc < 0.0:
            a = c
            fa = fc
            if side == -1:
                fb *= 0.5
            side = -1
        else:
            b = c
            fb = fc
            if side == 1:
                fa *= 0.5
            side = 1
        if b - a <= 0.5 * w_old:
            slow = 0
        else:
            slow += 1
    return exp(b)


cdef inline double fam_eval(int kind, const double* prm, double scale, bint conj,
                            double x) noexcept nogil:
    cdef double z = scale * x
    cdef double xs, out
    if not conj:
        return base_eval(kind, prm, z)
    if z == 0.0:
        return 0.0
    xs = conj_solve(kind, prm, z)
    if xs == INFINITY:
        return INFINITY
    out = xs * z - base_eval(kind, prm, xs)
    return out if out > 0.0 else 0.0


cdef inline double fam_deriv(int kind, const double* prm, double scale, bint conj,
                             double x) noexcept nogil:
    cdef double z = scale * x
    if not conj:
        return scale * base_deriv(kind, prm, z)
    return scale * conj_solve(kind, prm, z)


def family_eval(int kind, params, double scale, bint conj, x):
    cdef const double[::1] p = np.ascontiguousarray(params, dtype=np.float64).reshape(-1)
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).reshape(-1)
    out = np.empty(xv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, n = xv.shape[0]
    cdef double dummy = 0.0
    cdef const double* pp = &p[0] if p.shape[0] > 0 else &dummy
    with nogil:
        for i in range(n):
            ov[i] = fam_eval(kind, pp, scale, conj, xv[i])
    return out.reshape(np.shape(x))


def family_deriv(int kind, params, double scale, bint conj, x):
    cdef const double[::1] p = np.ascontiguousarray(params, dtype=np.float64).reshape(-1)
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).reshape(-1)
    out = np.empty(xv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, n = xv.shape[0]
    cdef double dummy = 0.0
    cdef const double* pp = &p[0] if p.shape[0] > 0 else &dummy
    with nogil:
        for i in range(n):
            ov[i] = fam_deriv(kind, pp, scale, conj, xv[i])
    return out.reshape(np.shape(x))


def conj_argmax(int kind, params, y):
    cdef const double[::1] p = np.ascontiguousarray(params, dtype=np.float64).reshape(-1)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64).reshape(-1)
    out = np.empty(yv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, n = yv.shape[0]
    cdef double dummy = 0.0
    cdef const double* pp = &p[0] if p.shape[0] > 0 else &dummy
    with nogil:
        for i in range(n):
            ov[i] = conj_solve(kind, pp, yv[i])
    return out.reshape(np.shape(y))


cdef double c_modular(int kind, const double* prm, double scale, bint conj,
                      const double[::1] v, const double[::1] w, double lam) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0, t
    cdef double inv = 1.0 / lam
    for i in range(v.shape[0]):
        if w[i] > 0.0:
            t = fam_eval(kind, prm, scale, conj, v[i] * inv)
            if not isfinite(t):
                return INFINITY
            acc += w[i] * t
    return acc


def modular(int kind, params, double scale, bint conj, values, weights, double lam):
    cdef const double[::1] p = np.ascontiguousarray(params, dtype=np.float64).reshape(-1)
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64).reshape(-1)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64).reshape(-1)
    cdef double dummy = 0.0
    cdef const double* pp = &p[0] if p.shape[0] > 0 else &dummy
    cdef double res
    with nogil:
        res = c_modular(kind, pp, scale, conj, v, w, lam)
    return res


cdef inline double hval(double rho, double thr) noexcept nogil:
    if thr == 0.0:
        return INFINITY if rho > 0.0 else -INFINITY
    if rho == 0.0:
        return -INFINITY
    if not isfinite(rho):
        return INFINITY
    return log(rho) - log(thr)


def gauge(int kind, params, double scale, bint conj, values, weights, double threshold,
          double rtol=1e-14):
    """Smallest lambda with sum w F(v / lambda) <= threshold.

    Returns ``(lam, evaluations, final log-bracket width)``.
    """
    cdef const double[::1] p = np.ascontiguousarray(params, dtype=np.float64).reshape(-1)
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64).reshape(-1)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64).reshape(-1)
    cdef double dummy = 0.0
    cdef const double* pp = &p[0] if p.shape[0] > 0 else &dummy
    cdef double vmax = 0.0, ta, tb, ra, rb, fa, fb, c, rc, fc, step, w_old
    cdef Py_ssize_t i
    cdef int its = 0, side = 0, slow = 0, it
    cdef bint overflow = False, zero = False
    for i in range(v.shape[0]):
        if v[i] > vmax:
            vmax = v[i]
    if vmax <= 0.0:
        return 0.0, 0, 0.0
    with nogil:
        tb = log(vmax)
        rb = c_modular(kind, pp, scale, conj, v, w, exp(tb))
        its += 1
        step = 2.0
        while rb > threshold:
            tb += step
            step *= 2.0
            rb = c_modular(kind, pp, scale, conj, v, w, exp(tb))
            its += 1
            if tb > T_MAX:
                overflow = True
                break
        if not overflow:
            ta = tb - 2.0
            ra = c_modular(kind, pp, scale, conj, v, w, exp(ta))
            its += 1
            step = 2.0
            while ra <= threshold:
                tb = ta
                rb = ra
                ta -= step
                step *= 2.0
                if ta < T_MIN:
                    zero = True
                    break
                ra = c_modular(kind, pp, scale, conj, v, w, exp(ta))
                its += 1
        if not overflow and not zero:
            fa = hval(ra, threshold)
            fb = hval(rb, threshold)
            for it in range(MAXIT):
                if tb - ta <= rtol * (fabs(tb) if fabs(tb) > 1.0 else 1.0) or fb == 0.0:
                    break
                if isfinite(fa) and isfinite(fb) and slow < 2:
                    c = tb - fb * (tb - ta) / (fb - fa)
                    if not (c > ta and c < tb):
                        c = 0.5 * (ta + tb)
                        slow = 0
                else:
                    c = 0.5 * (ta + tb)
                    slow = 0
                if not (c > ta and c < tb):
                    break
                rc = c_modular(kind, pp, scale, conj, v, w, exp(c))
                its += 1
                fc = hval(rc, threshold)
                w_old = tb - ta
                if fc > 0.0:
                    ta = c
                    fa = fc
                    if side == 1:
                        fb *= 0.5
                    side = 1
                else:
                    tb = c
                    fb = fc
                    if side == -1:
                        fa *= 0.5
                    side = -1
                if tb - ta <= 0.5 * w_old:
                    slow = 0
                else:
                    slow += 1
    if overflow:
        raise OverflowError("modular exceeds the threshold for every admissible scale")
    if zero:
        return 0.0, its, 0.0
    if fb == 0.0:
        return exp(tb), its, 0.0
    return exp(tb), its, tb - ta

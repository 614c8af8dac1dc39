"""Numerical checks of the Fourier-side inequalities and the ratio search.

Every check draws random band-limited functions, evaluates both sides with the
norms in :mod:`orlicz_hy.norms` and records per-sample margins
``lhs - rhs`` in a :class:`VerificationReport`.  Random samples are scaled to
unit ``L^2`` norm; all quantities involved are homogeneous, so this only fixes
the size of the absolute tolerances.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import norms
from .errors import BadExponent, HypothesisFailed, NoFit, NonFiniteModular
from .spaces import (
    DEFAULT_OVERSAMPLE,
    SampledFunction,
    SpectralCoefficients,
    analyze,
    get_space,
    random_coefficients,
    synthesize,
)
from .young import builtin, check_order, from_spec, pair_from_spec

REFINE_PROBES = 8
REFINE_TOL = 1e-6
MAX_NODES = 5_000_000
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
SWEEP_RTOL = 1e-9


@dataclass
class VerificationReport:
    inequality: str
    space: str
    pair: object
    L: float
    n: int
    seed: int
    tol: float
    samples: list
    aggregate: dict
    refinement: dict
    details: dict = field(default_factory=dict)
    extra_ok: bool = True

    @property
    def max_margin(self):
        return self.aggregate.get("max_margin", -math.inf)

    @property
    def violations(self):
        return sum(1 for s in self.samples if s["margin"] > self.tol)

    @property
    def verdict(self):
        """Pass iff every margin is within tolerance, refinement is stable and side checks hold."""
        if self.violations:
            return False
        if not self.refinement.get("accepted", True):
            return False
        return bool(self.extra_ok)

    def to_json(self):
        return {
            "inequality": self.inequality,
            "space": self.space,
            "pair": self.pair,
            "L": self.L,
            "n": self.n,
            "seed": self.seed,
            "tol": self.tol,
            "samples": self.samples,
            "aggregate": self.aggregate,
            "refinement": self.refinement,
            "details": self.details,
            "verdict": "pass" if self.verdict else "fail",
        }


def _rows(lhs, rhs, scale=None):
    out = []
    for i, (a, b) in enumerate(zip(lhs, rhs)):
        s = 1.0 if scale is None else scale[i]
        out.append({"lhs": float(a), "rhs": float(b), "margin": float((a - b) / s)})
    return out


def _aggregate(rows, **more):
    margins = [r["margin"] for r in rows]
    ratios = [r["lhs"] / r["rhs"] for r in rows if r["rhs"] > 0]
    agg = {
        "max_margin": max(margins) if margins else 0.0,
        "max_ratio": max(ratios) if ratios else 0.0,
        "violations": 0,
    }
    agg.update(more)
    return agg


def sample_rng(seed, i):
    return np.random.default_rng([int(seed), int(i)])


def unit_sample(space, reps, seed, i, profile="flat"):
    """Random coefficients on ``reps`` normalised to unit ``L^2`` norm."""
    sigma = random_coefficients(space, reps, sample_rng(seed, i), profile)
    l2 = math.sqrt(sum(r.d * float(np.sum(np.abs(b) ** 2)) for r, b in sigma.items()))
    return sigma * (1.0 / l2) if l2 > 0 else sigma


def _refinement_delta(values_fn, probes, quad, fine):
    delta = 0.0
    for i in probes:
        a = np.asarray(values_fn(i, quad), dtype=float)
        b = np.asarray(values_fn(i, fine), dtype=float)
        rel = np.abs(a - b) / np.maximum(np.abs(b), 1e-300)
        delta = max(delta, float(rel.max()))
    return delta


def resolve_quadrature(values_fn, n, space, L, oversample, adaptive=True, max_nodes=MAX_NODES):
    """Pick the quadrature for a run by doubling the oversampling factor.

    ``values_fn(i, quad)`` returns the reported norms of sample ``i``.
    Starting from ``oversample``, the factor doubles until the norms of the
    first ``REFINE_PROBES`` samples move by less than ``REFINE_TOL`` relative;
    the chosen grid is then validated the same way on every sample, doubling
    further if any sample still moves.  If the doubled grid would exceed
    ``max_nodes`` the refinement is not accepted.
    """
    probes = list(range(min(REFINE_PROBES, n)))
    everyone = list(range(n))
    os = oversample
    history = []
    while True:
        quad = space.quadrature(L, os)
        fine = space.quadrature(L, 2 * os)
        if not probes:
            return quad, {"oversample": os, "delta": 0.0, "probes": 0, "accepted": True, "history": history}
        if fine.size > max_nodes:
            # keep the last grid whose refinement was measured
            if history:
                os = history[-1][0]
                quad = space.quadrature(L, os)
            return quad, {"oversample": os, "delta": history[-1][1] if history else None, "probes": len(probes),
                          "accepted": False, "history": history, "reason": "node budget exhausted"}
        delta = _refinement_delta(values_fn, probes, quad, fine)
        if delta < REFINE_TOL and len(probes) < n:
            # probes have settled; confirm on every sample
            probes = everyone
            delta = _refinement_delta(values_fn, probes, quad, fine)
        history.append([os, delta])
        if delta < REFINE_TOL or not adaptive:
            return quad, {"oversample": os, "refined_oversample": 2 * os, "delta": delta, "probes": len(probes),
                          "accepted": delta < REFINE_TOL, "history": history}
        os *= 2


def _pick_quadrature(values_fn, n, space, L, oversample, refine):
    if refine:
        return resolve_quadrature(values_fn, n, space, L, oversample)
    return space.quadrature(L, oversample), {"oversample": oversample, "delta": None, "accepted": True,
                                             "skipped": True}


# --------------------------------------------------------------------------


def verify_parseval(space, L, n_samples=200, seed=0, oversample=1, tol=1e-9, profile="flat"):
    """``integral |f|^2 = sum d ||fhat||_HS^2``; the quadrature is exact here, so ``oversample=1``."""
    space = get_space(space)
    quad = space.quadrature(L, oversample)
    reps = space.reps(L)
    lhs, rhs, gaps = [], [], []
    for i in range(n_samples):
        sigma = random_coefficients(space, reps, sample_rng(seed, i), profile)
        f = synthesize(sigma, quad)
        fh = analyze(f, L)
        a = float(np.sum(quad.weights * np.abs(f.values) ** 2))
        b = sum(r.d * float(np.sum(np.abs(blk) ** 2)) for r, blk in fh.items())
        lhs.append(a)
        rhs.append(b)
        gaps.append(abs(a - b) / b if b > 0 else abs(a))
    rows = [{"lhs": a, "rhs": b, "margin": g} for a, b, g in zip(lhs, rhs, gaps)]
    agg = _aggregate(rows, max_relative_gap=max(gaps) if gaps else 0.0)
    rep = VerificationReport("parseval", space.name, None, L, n_samples, seed, tol, rows, agg,
                             {"oversample": oversample, "delta": 0.0, "accepted": True, "exact": True})
    rep.aggregate["violations"] = rep.violations
    return rep


def verify_hy_lp(space, p, L, n_samples=200, seed=0, oversample=DEFAULT_OVERSAMPLE, tol=None,
                 profile="flat", refine=True):
    """``||fhat||_{l^q} <= ||f||_{L^p}`` for ``1 <= p <= 2``, ``q = p/(p-1)``."""
    p = float(p)
    if not 1.0 <= p <= 2.0:
        raise BadExponent(f"Hausdorff-Young needs 1 <= p <= 2, got {p}")
    q = math.inf if p == 1.0 else p / (p - 1.0)
    if tol is None:
        tol = 1e-9 if p == 2.0 else 1e-6
    space = get_space(space)
    reps = space.reps(L)

    def sides(i, qd):
        sigma = unit_sample(space, reps, seed, i, profile)
        f = synthesize(sigma, qd)
        return norms.dual_lp(analyze(f, L), q), norms.lp_norm(f, p)

    quad, refinement = _pick_quadrature(sides, n_samples, space, L, oversample, refine)
    lhs, rhs = zip(*(sides(i, quad) for i in range(n_samples))) if n_samples else ((), ())
    rows = _rows(lhs, rhs)
    gap = max((abs(r["margin"]) for r in rows), default=0.0)
    agg = _aggregate(rows, q=q, max_abs_gap=gap)
    rep = VerificationReport("hy-lp", space.name, f"p={p:.17g}", L, n_samples, seed, tol, rows, agg, refinement)
    if p == 2.0:
        # Plancherel: equality, not only the inequality
        rep.extra_ok = gap <= tol
        rep.details["equality_gap"] = gap
    rep.aggregate["violations"] = rep.violations
    return rep


# --------------------------------------------------------------------------
# Orlicz Hausdorff-Young


def _is_unbounded(ratio, t, decade_up=True):
    """True if ``ratio`` grows monotonically through the last (or first) decade of ``t``."""
    if not np.all(np.isfinite(ratio)):
        return True
    if decade_up:
        sel = t >= t[-1] / 10.0
        r = ratio[sel]
    else:
        sel = t <= t[0] * 10.0
        r = ratio[sel][::-1]
    return bool(r.size >= 2 and np.all(np.diff(r) >= 0) and r[-1] > r[0] * (1.0 + 1e-3))


def growth_fit(psi, t_min=1e-6, t_max=1e3, p_max=4.0, p_step=0.01, n_t=901):
    """Least grid ``p >= 1`` with ``sup_t Psi'(t) / t^p`` finite on ``[t_min, t_max]``.

    A ratio counts as unbounded when it increases monotonically through the
    outermost decade at either end of the scan.  Returns ``(c0, p)``.
    """
    t = np.geomspace(t_min, t_max, n_t)
    dpsi = np.asarray(psi.deriv(t), dtype=float)
    for p in np.round(np.arange(1.0, p_max + p_step / 2, p_step), 10):
        with np.errstate(over="ignore", invalid="ignore"):
            ratio = dpsi / t ** p
        if _is_unbounded(ratio, t, True) or _is_unbounded(ratio, t, False):
            continue
        return float(ratio.max()), float(p)
    raise NoFit(f"{psi.label}: Psi'(t)/t^p unbounded on [{t_min:g}, {t_max:g}] for every p <= {p_max:g}")


PHI0 = builtin("phi0")


def check_hypotheses(pair):
    """Witness ``Phi < Phi0`` and fit ``Psi'(t) <= c0 t^p``; raise HypothesisFailed otherwise."""
    w = check_order(pair.phi, PHI0)
    if w is None:
        raise HypothesisFailed(f"{pair.phi.label} is not dominated by t^2/2 (no ordering witness found)")
    try:
        c0, p = growth_fit(pair.psi)
    except NoFit as exc:
        raise HypothesisFailed(f"growth condition fails: {exc}") from None
    return {
        "order_witness": {"a": w.a, "b": w.b, "c": w.c, "d": w.d, "x0": w.x0, "x1": w.x1},
        "growth": {"c0": c0, "p": p, "t_min": 1e-6, "t_max": 1e3},
    }


def a_priori_bound(pair, reps):
    """``max sqrt(d k) / Psi^-1(Psi(1) / (#reps k d))`` over ``reps``: a finite cap on the ratio."""
    psi = pair.psi
    n = len(reps)
    best = 0.0
    for r in reps:
        target = psi.eval(1.0) / (n * r.k * r.d)
        inv = psi.inverse(target)
        if inv == 0:
            # Psi vanishes up to a positive level: use that level
            inv = _last_zero(psi)
        best = max(best, math.sqrt(r.d * r.k) / inv)
    return best


def _last_zero(psi):
    lo, hi = 0.0, 1.0
    while psi.eval(hi) == 0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if psi.eval(mid) == 0:
            lo = mid
        else:
            hi = mid
    return lo


def _resolve_pair(pair):
    return pair_from_spec(pair) if isinstance(pair, str) else pair


def hy_orlicz_ratio(pair, f, L):
    """``N_Psi(F_f) / N_Phi(f)`` with the numerator, denominator and Fourier data."""
    fh = analyze(f, L)
    num = norms.dual_orlicz(pair.psi, fh).value
    den = norms.luxemburg(pair.phi, f).value
    return num, den, fh


def _hy_orlicz_run(space, pair, L, n_samples, seed, quad, profile):
    reps = space.reps(L)
    bound = a_priori_bound(pair, reps)
    num, den, pointwise = [], [], 0.0
    for i in range(n_samples):
        sigma = unit_sample(space, reps, seed, i, profile)
        f = synthesize(sigma, quad)
        a, b, fh = hy_orlicz_ratio(pair, f, L)
        num.append(a)
        den.append(b)
        pr = norms.profile(fh)
        cap = np.sqrt(pr.d * pr.k) * b
        pointwise = max(pointwise, float(np.max((pr.values - cap) / np.maximum(cap, 1e-300))))
    return num, den, bound, pointwise


HY_ORLICZ_PROFILE = "decay:3"


def verify_hy_orlicz(space, pair, L, n_samples=200, seed=0, oversample=DEFAULT_OVERSAMPLE, tol=1e-6,
                     profile=HY_ORLICZ_PROFILE, refine=True, stability=True, anchor=True):
    """Ratio ``N_Psi(F_f) / N_Phi(f)`` over random band-limited ``f``.

    Each sample is checked against the a priori cap ``B`` (margin
    ``N_Psi(F_f) - B N_Phi(f)``) and the pointwise profile bound
    ``F_f(pi) <= sqrt(d k) N_Phi(f)``.  The reported maximum ratio is an
    empirical lower bound for the best constant, not a certificate.

    The default spectral profile decays like ``(1+l)^-3`` so that the sample
    law has summable tail energy on every space; the band-``L`` samples then
    converge as ``L`` grows and comparing ``L`` with ``2L`` is meaningful.
    """
    space = get_space(space)
    label = pair if isinstance(pair, str) else pair.label
    pair = _resolve_pair(pair)
    hyp = check_hypotheses(pair)

    def vals(i, qd):
        sigma = unit_sample(space, space.reps(L), seed, i, profile)
        a, b, _ = hy_orlicz_ratio(pair, synthesize(sigma, qd), L)
        return a, b

    quad, refinement = _pick_quadrature(vals, n_samples, space, L, oversample, refine)
    num, den, bound, pointwise = _hy_orlicz_run(space, pair, L, n_samples, seed, quad, profile)
    rows = [{"lhs": float(a), "rhs": float(b), "margin": float((a - bound * b) / max(1.0, bound * b))}
            for a, b in zip(num, den)]
    ratios = [a / b for a, b in zip(num, den)]
    details = {"hypotheses": hyp, "a_priori_bound": bound, "max_profile_excess": pointwise,
               "certificate": False, "max_ratio_random": max(ratios) if ratios else None}
    if anchor:
        one = SampledFunction(quad, np.ones(quad.shape), band=0.0)
        a, b, _ = hy_orlicz_ratio(pair, one, L)
        details["constant_ratio"] = a / b
        ratios.append(a / b)
    agg = _aggregate(rows)
    agg["max_ratio"] = max(ratios) if ratios else 0.0
    if stability:
        quad2 = space.quadrature(2 * L, refinement["oversample"])
        n2, d2, _, _ = _hy_orlicz_run(space, pair, 2 * L, n_samples, seed, quad2, profile)
        r2 = max([a / b for a, b in zip(n2, d2)] + ([details["constant_ratio"]] if anchor else []))
        details["max_ratio_doubled_L"] = r2
        details["relative_change_doubled_L"] = abs(r2 - agg["max_ratio"]) / agg["max_ratio"]
    rep = VerificationReport("hy-orlicz", space.name, label, L, n_samples, seed, tol, rows, agg, refinement, details)
    rep.extra_ok = pointwise <= tol and all(math.isfinite(r) for r in ratios)
    rep.aggregate["violations"] = rep.violations
    return rep


# --------------------------------------------------------------------------
# Hoelder


def sgn(z):
    """``z / |z|`` with ``sgn(0) = 0``."""
    z = np.asarray(z, dtype=complex)
    a = np.abs(z)
    out = np.zeros_like(z)
    nz = a > 0
    out[nz] = z[nz] / a[nz]
    return out


def extremal_partner(pair, f):
    """``g = Psi'(|f| / N_Psi(f)) sgn(f)``, the Hoelder partner of ``f`` measured in ``N_Psi``."""
    n = norms.luxemburg(pair.psi, f).value
    vals = pair.psi.deriv(np.abs(f.values) / n) * sgn(f.values)
    return SampledFunction(f.quad, vals), n


def hoelder_sides(pair, f, g):
    lhs = abs(complex(np.sum(f.weights * f.values * g.values)))
    rhs = norms.luxemburg(pair.phi, f).value * norms.luxemburg(pair.psi, g).value
    return lhs, rhs


def verify_hoelder(space, pair, L, n_samples=200, seed=0, oversample=DEFAULT_OVERSAMPLE, tol=1e-6,
                   profile="flat", refine=True):
    """``|integral f g| <= N_Phi(f) N_Psi(g)`` plus the extremal-partner equality."""
    space = get_space(space)
    label = pair if isinstance(pair, str) else pair.label
    pair = _resolve_pair(pair)
    if not pair.normalized:
        raise HypothesisFailed(f"{label}: pair is not normalised")
    reps = space.reps(L)

    def vals(i, qd):
        f = synthesize(unit_sample(space, reps, seed, 2 * i, profile), qd)
        g = synthesize(unit_sample(space, reps, seed, 2 * i + 1, profile), qd)
        return hoelder_sides(pair, f, g)

    quad, refinement = _pick_quadrature(vals, n_samples, space, L, oversample, refine)
    lhs, rhs = [], []
    norm_err, eq_gap = 0.0, 0.0
    for i in range(n_samples):
        f = synthesize(unit_sample(space, reps, seed, 2 * i, profile), quad)
        g = synthesize(unit_sample(space, reps, seed, 2 * i + 1, profile), quad)
        a, b = hoelder_sides(pair, f, g)
        lhs.append(a)
        rhs.append(b)
        gstar, npsi = extremal_partner(pair, f)
        nphi = norms.luxemburg(pair.phi, gstar).value
        integral = float(np.sum(f.weights * np.abs(f.values * gstar.values)))
        norm_err = max(norm_err, abs(nphi - 1.0))
        eq_gap = max(eq_gap, abs(integral - nphi * npsi) / max(1.0, nphi * npsi))
    rows = _rows(lhs, rhs)
    agg = _aggregate(rows, extremal_norm_error=norm_err, extremal_equality_gap=eq_gap)
    rep = VerificationReport("hoelder", space.name, label, L, n_samples, seed, tol, rows, agg, refinement)
    rep.extra_ok = norm_err <= tol and eq_gap <= tol
    rep.details = {"extremal_norm_error": norm_err, "extremal_equality_gap": eq_gap}
    rep.aggregate["violations"] = rep.violations
    return rep


# --------------------------------------------------------------------------
# embeddings


EMBED_GRID = [1.0, 1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4, 2.6, 2.8, 3.0, math.inf]


def embedding_checks(sigma, grid=EMBED_GRID):
    """``(name, lhs, rhs)`` for the l^p chain and both Schatten comparisons."""
    lp = {p: norms.dual_lp(sigma, p) for p in grid}
    sch = {p: norms.dual_schatten(sigma, p) for p in grid}
    out = []
    for p1, p2 in zip(grid[:-1], grid[1:]):
        out.append((f"lp{p2:g}<=lp{p1:g}", lp[p2], lp[p1]))
    for p in grid:
        if p <= 2:
            out.append((f"sch{p:g}<=lp{p:g}", sch[p], lp[p]))
        if p >= 2:
            out.append((f"lp{p:g}<=sch{p:g}", lp[p], sch[p]))
    return out


def verify_embeddings(space, L, seed=0, n_samples=500, tol=1e-12, profile="flat"):
    """l^p inclusions and the Schatten comparisons on random coefficients (no quadrature)."""
    space = get_space(space)
    reps = space.reps(L)
    rows = []
    worst_check = None
    for i in range(n_samples):
        sigma = unit_sample(space, reps, seed, i, profile)
        best = None
        for name, a, b in embedding_checks(sigma):
            m = (a - b) / max(1.0, abs(b))
            if best is None or m > best[3]:
                best = (name, a, b, m)
        rows.append({"lhs": float(best[1]), "rhs": float(best[2]), "margin": float(best[3])})
        if worst_check is None or best[3] > worst_check[1]:
            worst_check = (best[0], best[3])
    agg = _aggregate(rows)
    rep = VerificationReport("embeddings", space.name, None, L, n_samples, seed, tol, rows, agg,
                             {"oversample": None, "delta": 0.0, "accepted": True, "exact": True},
                             {"tightest_check": worst_check[0] if worst_check else None, "p_grid": [
                                 p if math.isfinite(p) else "inf" for p in EMBED_GRID]})
    rep.aggregate["violations"] = rep.violations
    return rep


# --------------------------------------------------------------------------
# ratio search


@dataclass
class RatioSearchResult:
    lam: str
    pair: str
    ratio: float
    coefficients: SpectralCoefficients
    bound: float
    constant_ratio: object
    iterations: int
    restarts: int
    evaluations: int
    trace: list

    def to_json(self):
        return {
            "lambda": self.lam,
            "pair": self.pair,
            "best_ratio": self.ratio,
            "a_priori_bound": self.bound,
            "constant_ratio": self.constant_ratio,
            "certificate": False,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "evaluations": self.evaluations,
            "trace": self.trace,
            "coefficients": self.coefficients.to_json(),
        }


class _RatioObjective:
    """Ratio ``N_Psi(F) / N_Phi(f)`` as a function of the real coefficient vector."""

    def __init__(self, space, pair, reps, quad):
        self.space, self.pair, self.reps, self.quad = space, pair, list(reps), quad
        n = sum(r.k * r.d for r in self.reps)
        self.n = n
        cols = []
        for j in range(n):
            z = np.zeros(2 * n)
            z[j] = 1.0
            sig = SpectralCoefficients.from_vector(space, self.reps, z)
            cols.append(synthesize(sig, quad).values.ravel())
        self.basis = np.array(cols).T if cols else np.zeros((quad.size, 0))
        self.w = quad.weights.ravel()
        self.sizes = [r.k * r.d for r in self.reps]
        self.d = np.array([r.d for r in self.reps], dtype=float)
        self.k = np.array([r.k for r in self.reps], dtype=float)
        self.evals = 0
        phi, psi = pair.phi, pair.psi
        self.thr_phi = phi.eval(1.0)
        self.thr_psi = psi.eval(1.0)

    def __call__(self, v):
        self.evals += 1
        z = v[: self.n] + 1j * v[self.n:]
        a = np.abs(self.basis @ z)
        hs = np.sqrt(np.add.reduceat(np.abs(z) ** 2, np.cumsum([0] + self.sizes[:-1])))
        F = hs / np.sqrt(self.k)
        num = norms._weighted_gauge(self.pair.psi, F, self.d * self.k, self.thr_psi, 1e-14).value
        den = norms._weighted_gauge(self.pair.phi, a, self.w, self.thr_phi, 1e-14).value
        return num / den if den > 0 else 0.0


def _golden_max(fn, lo, hi, tol):
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    while hi - lo > tol:
        if f1 > f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = fn(x2)
    return (x1, f1) if f1 > f2 else (x2, f2)


def _ascend(obj, v, max_sweeps, line_tol, n_scan=8):
    """Coordinate-wise ascent on the unit sphere along great circles."""
    best = obj(v)
    sweeps = 0
    dim = v.size
    for sweeps in range(1, max_sweeps + 1):
        start = best
        for j in range(dim):
            e = np.zeros(dim)
            e[j] = 1.0
            u = e - np.dot(e, v) * v
            nu = np.linalg.norm(u)
            if nu < 1e-12:
                continue
            u /= nu

            def along(t, v=v, u=u):
                return obj(math.cos(t) * v + math.sin(t) * u)

            ts = np.linspace(-math.pi / 2, math.pi / 2, n_scan + 1)[:-1] + math.pi / (2 * n_scan)
            vals = [along(t) for t in ts]
            i = int(np.argmax(vals))
            h = math.pi / n_scan
            t, val = _golden_max(along, ts[i] - h, ts[i] + h, line_tol)
            if vals[i] > val:
                t, val = ts[i], vals[i]
            if val > best:
                v = math.cos(t) * v + math.sin(t) * u
                v /= np.linalg.norm(v)
                best = val
        if best - start <= SWEEP_RTOL * max(1.0, abs(best)):
            break
    return v, best, sweeps


def ratio_search(space, pair, lam="band:2", restarts=50, seed=0, oversample=DEFAULT_OVERSAMPLE,
                 max_sweeps=200, line_tol=1e-8):
    """Multi-start search for the largest ``N_Psi(F_f) / N_Phi(f)`` with ``f`` supported on ``lam``."""
    space = get_space(space)
    label = pair if isinstance(pair, str) else pair.label
    pair = _resolve_pair(pair)
    reps = space.parse_reps(lam) if isinstance(lam, str) else list(lam)
    top = max(r.degree for r in reps)
    quad = space.quadrature(top, oversample)
    obj = _RatioObjective(space, pair, reps, quad)
    bound = a_priori_bound(pair, reps)
    rng = np.random.default_rng(seed)
    starts = []
    const = None
    for pos, r in enumerate(reps):
        if r.degree == 0:
            z = np.zeros(2 * obj.n)
            z[sum(obj.sizes[:pos])] = 1.0
            starts.append(z)
            const = obj(z)
            break
    while len(starts) < restarts:
        starts.append(rng.standard_normal(2 * obj.n))
    best_v, best = None, -math.inf
    trace = []
    total_sweeps = 0
    for v0 in starts[:max(restarts, 1)]:
        v0 = v0 / np.linalg.norm(v0)
        v, val, sweeps = _ascend(obj, v0, max_sweeps, line_tol)
        total_sweeps += sweeps
        trace.append({"ratio": val, "sweeps": sweeps})
        if val > best:
            best_v, best = v, val
    sigma = SpectralCoefficients.from_vector(space, reps, best_v)
    f = synthesize(sigma, quad)
    num = norms.dual_orlicz(pair.psi, sigma).value
    den = norms.luxemburg(pair.phi, f).value
    return RatioSearchResult(lam if isinstance(lam, str) else "custom", label, num / den, sigma, bound, const,
                             total_sweeps, len(trace), obj.evals, trace)

"""Acceptance runs at their stated tolerances.

Every test prints one ``[PASS]`` or ``[FAIL]`` line; the lines are repeated in
the terminal summary.  Run with ``pytest tests/test_acceptance.py -v``.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from orlicz_hy.norms import dual_lp, dual_orlicz, luxemburg, luxemburg_scan
from orlicz_hy.spaces import get_space, random_bandlimited, synthesize
from orlicz_hy.verify import (
    ratio_search,
    verify_embeddings,
    verify_hoelder,
    verify_hy_lp,
    verify_hy_orlicz,
    verify_parseval,
)
from orlicz_hy.young import builtin, conjugate, from_spec, pair_from_spec

SPACES = ["torus:1", "sphere2", "su2"]


# ------------------------------------------------------------- criterion 1


def test_parseval_all_spaces(record):
    t0 = time.perf_counter()
    gaps = {s: verify_parseval(s, 16, n_samples=200, seed=0).aggregate["max_relative_gap"] for s in SPACES}
    elapsed = time.perf_counter() - t0
    worst = max(gaps.values())
    ok = worst <= 1e-9 and elapsed <= 60.0
    record(1, ok, f"Plancherel L=16 x200 on {len(SPACES)} spaces, max rel gap {worst:.2e} (<=1e-9), "
                  f"{elapsed:.1f}s (<=60s)")
    assert ok


# ------------------------------------------------------------- criterion 2


@pytest.mark.slow
def test_hy_lp_all_spaces(record):
    worst, eq_gap, bad, unsettled = -math.inf, 0.0, 0, []
    for s in SPACES:
        for p in (1.0, 1.2, 1.5, 2.0):
            rep = verify_hy_lp(s, p, 8, n_samples=200, seed=0)
            bad += sum(1 for r in rep.samples if r["margin"] > 1e-6)
            worst = max(worst, rep.max_margin)
            if p == 2.0:
                eq_gap = max(eq_gap, rep.details["equality_gap"])
            if not rep.refinement.get("accepted", True):
                unsettled.append(f"{s}/p={p:g}")
    ok = bad == 0 and eq_gap <= 1e-9
    note = f"; refinement budget hit on {','.join(unsettled)}" if unsettled else ""
    record(2, ok, f"l^q <= L^p, L=8 x200, violations {bad} at 1e-6 (max margin {worst:.2e}), "
                  f"p=2 equality gap {eq_gap:.2e} (<=1e-9){note}")
    assert ok


# ------------------------------------------------------------- criterion 3


def test_embeddings_all_spaces(record):
    bad, worst = 0, -math.inf
    for s in SPACES:
        rep = verify_embeddings(s, 4, seed=0, n_samples=500, tol=1e-12)
        bad += rep.violations
        worst = max(worst, rep.max_margin)
    ok = bad == 0
    record(3, ok, f"l^p chain and Schatten comparisons x500 per space, violations {bad} at 1e-12 "
                  f"(max margin {worst:.2e})")
    assert ok


# ------------------------------------------------------------- criterion 4


@pytest.fixture(scope="module")
def hoelder_reports():
    return {spec: verify_hoelder("torus:1", spec, 8, n_samples=200, seed=0) for spec in ("power:1.5", "riordan:1.5")}


@pytest.mark.parametrize("spec", ["power:1.5", "riordan:1.5"])
def test_hoelder_inequality(record, hoelder_reports, spec):
    rep = hoelder_reports[spec]
    bad = sum(1 for r in rep.samples if r["margin"] > 1e-6)
    ok = bad == 0
    record(4, ok, f"Hoelder inequality {spec} x200, violations {bad} at 1e-6 (max margin {rep.max_margin:.2e})")
    assert ok


@pytest.mark.parametrize("spec", ["power:1.5", "riordan:1.5"])
def test_hoelder_extremal_equality(record, hoelder_reports, spec):
    rep = hoelder_reports[spec]
    gap = rep.details["extremal_equality_gap"]
    err = rep.details["extremal_norm_error"]
    ok = gap <= 1e-6 and err <= 1e-6
    record(4, ok, f"extremal partner {spec}: equality gap {gap:.2e} (<=1e-6), |N_Phi(g*)-1| {err:.2e} (<=1e-6)")
    assert ok


# ------------------------------------------------------------- criterion 5


@pytest.fixture(scope="module")
def riordan_runs():
    out = {}
    for s in ("torus:1", "sphere2"):
        for L in (8, 16):
            out[s, L] = verify_hy_orlicz(s, "riordan:1.5", L, n_samples=500, seed=0, stability=False)
    return out


@pytest.mark.slow
@pytest.mark.parametrize("space", ["torus:1", "sphere2"])
def test_hy_orlicz_riordan(record, riordan_runs, space):
    r8 = riordan_runs[space, 8].aggregate["max_ratio"]
    r16 = riordan_runs[space, 16].aggregate["max_ratio"]
    change = abs(r16 - r8) / r8
    ok = all(math.isfinite(r) and r >= 1 - 1e-9 for r in (r8, r16)) and change < 0.05
    record(5, ok, f"riordan:1.5 on {space} x500: max ratio L=8 {r8:.6f}, L=16 {r16:.6f} (>=1-1e-9, finite), "
                  f"relative change {change:.2%} (<5%)")
    assert ok


@pytest.mark.parametrize("space", ["torus:1", "sphere2"])
@pytest.mark.parametrize("spec", ["power:1.5", "power:2"])
def test_hy_orlicz_power(record, space, spec):
    rep = verify_hy_orlicz(space, spec, 8, n_samples=200, seed=0, stability=False)
    r = rep.aggregate["max_ratio"]
    ok = r <= 1 + 1e-8
    record(5, ok, f"{spec} on {space} x200: max ratio {r:.12f} (<=1+1e-8)")
    assert ok


# ------------------------------------------------------------- criterion 6


@pytest.mark.parametrize("spec", ["riordan:1.5", "exp"])
def test_gauge_matches_dense_scan(record, spec):
    phi = pair_from_spec(spec).phi
    space = get_space("torus:1")
    quad = space.quadrature(8, 4)
    worst = 0.0
    for seed in range(50):
        f = synthesize(random_bandlimited(space, 8, seed), quad)
        a = luxemburg(phi, f).value
        b = luxemburg_scan(phi, f, n=100_000).value
        worst = max(worst, abs(a - b) / a)
    ok = worst <= 1e-7
    record(6, ok, f"bisection vs 1e5-point lambda scan, {spec} x50: max rel diff {worst:.2e} (<=1e-7)")
    assert ok


CLOSED_FORMS = {
    "power:1.5": lambda y: y**3 / 3,
    "power:3": lambda y: y**1.5 / 1.5,
    "exp": lambda y: (1 + y) * np.log1p(y) - y,
}


@pytest.mark.parametrize("spec", sorted(CLOSED_FORMS))
def test_numeric_conjugate_closed_form(record, spec):
    y = np.geomspace(1e-2, 1e2, 64)
    got = conjugate(from_spec(spec), method="numeric").eval(y)
    ref = CLOSED_FORMS[spec](y)
    worst = float(np.max(np.abs(got - ref) / np.maximum(1.0, np.abs(ref))))
    ok = worst <= 1e-6
    record(6, ok, f"numeric conjugate {spec} vs closed form at 64 points: max diff {worst:.2e} (<=1e-6)")
    assert ok


def test_dual_orlicz_power_matches_dual_lp(record):
    worst = 0.0
    for i in range(100):
        space = get_space(SPACES[i % 3])
        p = (1.2, 1.5, 2.0, 3.0)[i % 4]
        sigma = random_bandlimited(space, 3, i)
        a = dual_orlicz(builtin("power", p), sigma).value
        b = dual_lp(sigma, p)
        worst = max(worst, abs(a - b) / b)
    ok = worst <= 1e-10
    record(6, ok, f"dual Orlicz gauge with x^p/p vs l^p x100: max rel diff {worst:.2e} (<=1e-10)")
    assert ok


# ------------------------------------------------------------- criterion 7


RATIO_CASES = [
    ("torus:1", "riordan:1.5", "first:6", 50),
    ("sphere2", "riordan:1.5", "band:2", 20),
    ("su2", "riordan:1.5", "first:2", 20),
    ("sphere2", "power:1.5", "band:2", 10),
]


@pytest.mark.slow
@pytest.mark.parametrize("space,spec,lam,restarts", RATIO_CASES)
def test_ratio_search_below_a_priori_bound(record, space, spec, lam, restarts):
    res = ratio_search(space, spec, lam, restarts=restarts, seed=0)
    ok = math.isfinite(res.ratio) and res.ratio <= res.bound * (1 + 1e-12)
    record(7, ok, f"ratio search {spec} on {space} {lam} ({restarts} restarts): best {res.ratio:.6f} "
                  f"<= bound {res.bound:.6f}")
    assert ok


# ------------------------------------------------------------- criterion 8


CLI_RUNS = [
    ["list"],
    ["verify", "parseval", "--space", "su2", "--L", "4", "-n", "20"],
    ["verify", "hy-lp", "--space", "sphere2", "--p", "1.5", "--L", "6", "-n", "30", "--seed", "3"],
    ["verify", "hy-orlicz", "--space", "torus:1", "--pair", "riordan:1.5", "--L", "6", "-n", "30"],
    ["verify", "hoelder", "--space", "torus:1", "--pair", "power:1.5", "--L", "6", "-n", "20", "--format", "csv"],
    ["verify", "embeddings", "--space", "su2", "--L", "3", "-n", "50"],
    ["ratio", "--space", "torus:1", "--pair", "riordan:1.5", "--lambda", "first:4", "--restarts", "50"],
    ["fit-growth", "--pair", "riordan:1.5"],
]


def _cli_bytes(argv, workdir):
    env = dict(os.environ, ORLICZ_HY_OUTPUT_DIR=str(workdir))
    proc = subprocess.run([sys.executable, "-m", "orlicz_hy.cli", *argv], env=env, capture_output=True)
    files = {}
    for path in sorted(workdir.iterdir()):
        files[path.name] = path.read_bytes()
        path.unlink()
    return proc.returncode, proc.stdout, files


@pytest.mark.parametrize("argv", CLI_RUNS, ids=lambda a: "-".join(a[:2]))
def test_cli_byte_identical(record, tmp_path, argv):
    first = _cli_bytes(argv, tmp_path)
    second = _cli_bytes(argv, tmp_path)
    ok = first == second and first[0] in (0, 1)
    size = sum(len(b) for b in first[2].values()) + len(first[1])
    record(8, ok, f"'{' '.join(argv)}' twice: byte-identical {first == second}, exit {first[0]}, {size} bytes")
    assert ok

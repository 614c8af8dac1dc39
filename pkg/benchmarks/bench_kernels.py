"""Compare the compiled and numpy kernel backends on the hot paths.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each row times one call shape that dominates a verification run: Young
function evaluation on a quadrature grid, the numeric conjugate, the
Luxemburg gauge on a grid, and the small coefficient-side gauge that the
ratio search evaluates hundreds of thousands of times.
"""

import argparse
import timeit

import numpy as np

from orlicz_hy import _pykernels
from orlicz_hy.spaces import get_space, random_bandlimited, synthesize
from orlicz_hy.young import pair_from_spec

try:
    from orlicz_hy import _ckernels
except ImportError:
    _ckernels = None


def cases():
    pair = pair_from_spec("riordan:1.5")
    kp, ks = pair.phi.kernel, pair.psi.kernel
    sp = get_space("sphere2")
    quad = sp.quadrature(16, 4)
    f = synthesize(random_bandlimited(sp, 16, 0), quad)
    a = np.ascontiguousarray(np.abs(f.values).ravel())
    a /= a.max()
    w = np.ascontiguousarray(quad.weights.ravel())
    y = np.geomspace(1e-3, 1e3, 4096)
    F = np.random.default_rng(1).random(6)
    ones = np.ones(6)
    thr_phi, thr_psi = pair.phi.eval(1.0), pair.psi.eval(1.0)
    return [
        (f"eval riordan, {a.size} nodes", lambda m: m.family_eval(kp.kind, kp.params, kp.scale, False, a)),
        ("conjugate eval, 4096 points", lambda m: m.family_eval(ks.kind, ks.params, ks.scale, True, y)),
        (f"Luxemburg gauge, {a.size} nodes", lambda m: m.gauge(kp.kind, kp.params, kp.scale, False, a, w, thr_phi, 1e-14)),
        ("conjugate gauge, 6 coefficients", lambda m: m.gauge(ks.kind, ks.params, ks.scale, True, F, ones, thr_psi, 1e-14)),
    ]


def best_time(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"{'case':40s} {'numpy':>12s} {'compiled':>12s} {'speedup':>8s}")
    for name, call in cases():
        tp = best_time(lambda: call(_pykernels), args.repeat)
        if _ckernels is None:
            print(f"{name:40s} {tp * 1e6:10.1f}us {'n/a':>12s}")
            continue
        tc = best_time(lambda: call(_ckernels), args.repeat)
        print(f"{name:40s} {tp * 1e6:10.1f}us {tc * 1e6:10.1f}us {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()

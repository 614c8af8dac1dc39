import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import sph_harm_y

from orlicz_hy.errors import BadParam, BandLimitExceeded, UnknownSpec
from orlicz_hy.spaces import (
    SampledFunction,
    SpectralCoefficients,
    analyze,
    constant,
    from_callable,
    get_space,
    normalized_legendre,
    random_bandlimited,
    synthesize,
    wigner_small_d,
)

SPACES = ["torus:1", "torus:2", "sphere2", "su2"]


def wigner_d_sum(l, m, n, beta):
    """Wigner small-d from the explicit factorial sum."""
    f = math.factorial
    j = l
    tot = 0.0
    for s in range(0, int(2 * j) + 1):
        a, b, c, d = j + n - s, s, m - n + s, j - m - s
        if min(a, b, c, d) < 0:
            continue
        num = (-1) ** (m - n + s) * math.cos(beta / 2) ** (2 * j + n - m - 2 * s) * math.sin(beta / 2) ** (m - n + 2 * s)
        tot += num / (f(round(a)) * f(round(b)) * f(round(c)) * f(round(d)))
    return math.sqrt(f(round(j + m)) * f(round(j - m)) * f(round(j + n)) * f(round(j - n))) * tot


def dense_synthesis(sigma, quad):
    pts = quad.points()
    out = np.zeros(pts.shape[0], dtype=complex)
    for rep, b in sigma.items():
        M = quad.space.matrix(rep, pts)
        out += rep.d * np.einsum("ij,nji->n", b, M)
    return out.reshape(quad.shape)


# ------------------------------------------------------------ enumeration


def test_rep_dimensions():
    for r in get_space("torus:1").reps(3):
        assert (r.d, r.k) == (1, 1)
    for r in get_space("sphere2").reps(5):
        assert (r.d, r.k) == (2 * r.index + 1, 1)
    labels = [r.index for r in get_space("su2").reps(2)]
    assert labels == [0.0, 0.5, 1.0, 1.5, 2.0]
    for r in get_space("su2").reps(2):
        assert r.d == r.k == int(2 * r.index + 1)


def test_torus_reps_sorted_by_degree():
    reps = get_space("torus:1").reps(2)
    assert [r.index for r in reps] == [(0,), (-1,), (1,), (-2,), (2,)]
    assert len(get_space("torus:2").reps(1)) == 9


def test_rep_set_specs():
    t = get_space("torus:1")
    assert [r.index for r in t.parse_reps("first:4")] == [(0,), (-1,), (1,), (-2,)]
    assert [r.index for r in t.parse_reps("reps:0;3")] == [(0,), (3,)]
    assert len(get_space("sphere2").parse_reps("band:2")) == 3
    assert [r.index for r in get_space("su2").parse_reps("first:3")] == [0.0, 0.5, 1.0]
    with pytest.raises(UnknownSpec):
        t.parse_reps("some:3")


def test_bad_labels():
    with pytest.raises(BadParam):
        get_space("sphere2").rep(1.5)
    with pytest.raises(BadParam):
        get_space("su2").rep(0.3)
    with pytest.raises(UnknownSpec):
        get_space("klein")


# -------------------------------------------------------------- quadrature


@pytest.mark.parametrize("space", SPACES)
@pytest.mark.parametrize("L", [0, 3, 8])
@pytest.mark.parametrize("os", [1, 4])
def test_weights_positive_unit_mass(space, L, os):
    q = get_space(space).quadrature(L, os)
    assert np.all(q.weights > 0)
    assert abs(q.weights.sum() - 1) <= 1e-12
    assert q.band >= L


def test_points_order_matches_values():
    q = get_space("su2").quadrature(1, 1)
    pts = q.points()
    beta, alpha, gamma = q.axes
    # values are stored on a (beta, alpha, gamma) grid; points list (alpha, beta, gamma)
    assert np.allclose(pts[1], [alpha[0], beta[0], gamma[1]])
    assert np.allclose(pts[gamma.size], [alpha[1], beta[0], gamma[0]])


# ------------------------------------------------------ matrix coefficients


def test_sphere_harmonics_match_scipy():
    sp = get_space("sphere2")
    rng = np.random.default_rng(3)
    pts = np.column_stack([rng.uniform(0, np.pi, 50), rng.uniform(0, 2 * np.pi, 50)])
    for l in range(7):
        M = sp.matrix(sp.rep(l), pts)
        for m in range(-l, l + 1):
            ref = math.sqrt(4 * math.pi / (2 * l + 1)) * sph_harm_y(l, m, pts[:, 0], pts[:, 1])
            np.testing.assert_allclose(M[:, m + l, 0], ref, atol=1e-13)


def test_legendre_normalization():
    x, w = np.polynomial.legendre.leggauss(40)
    P = normalized_legendre(12, x)
    for m in range(13):
        G = (P[m:, m] * w) @ P[m:, m].T * 2 * np.pi
        np.testing.assert_allclose(G, np.eye(13 - m), atol=1e-13)


@pytest.mark.parametrize("l", [0.5, 1.0, 1.5, 2.0, 3.5])
def test_wigner_d_matches_factorial_sum(l):
    betas = np.linspace(0.1, 3.0, 7)
    d = wigner_small_d(l, betas)
    ms = -l + np.arange(int(2 * l + 1))
    for b, beta in enumerate(betas):
        ref = np.array([[wigner_d_sum(l, m, n, beta) for n in ms] for m in ms])
        np.testing.assert_allclose(d[b], ref, atol=1e-12)


@pytest.mark.parametrize("space", SPACES)
def test_trace_identity_at_nodes(space):
    sp = get_space(space)
    q = sp.quadrature(3 if space == "su2" else 16, 1)
    pts = q.points()
    for rep in sp.reps(3 if space == "su2" else 16):
        M = sp.matrix(rep, pts)
        assert np.all(M[:, :, rep.k:] == 0)
        np.testing.assert_allclose(np.sum(np.abs(M) ** 2, axis=(1, 2)), rep.k, atol=1e-10)


@pytest.mark.parametrize("space", SPACES)
def test_schur_orthogonality(space):
    sp = get_space(space)
    L = 2 if space == "su2" else 4
    q = sp.quadrature(L, 1)
    pts = q.points()
    w = q.weights.ravel()
    cols = []
    for rep in sp.reps(L):
        M = sp.matrix(rep, pts)
        for i in range(rep.d):
            for j in range(rep.k):
                cols.append((rep.d, M[:, i, j]))
    A = np.column_stack([c for _, c in cols])
    G = (A.conj().T * w) @ A
    ref = np.diag([1.0 / d for d, _ in cols])
    np.testing.assert_allclose(G, ref, atol=1e-10)


# ---------------------------------------------------- analysis / synthesis


@pytest.mark.parametrize("space", SPACES)
def test_constant_analysis(space):
    sp = get_space(space)
    q = sp.quadrature(3, 2)
    fh = analyze(constant(q), 3)
    for rep, b in fh.items():
        target = 1.0 if rep.degree == 0 else 0.0
        assert abs(b[0, 0] - target) <= 1e-13
        assert np.max(np.abs(b - np.diag([target] + [0] * (rep.d - 1)))) <= 1e-13


def test_single_su2_coefficient():
    sp = get_space("su2")
    rep = sp.rep(1.5)
    q = sp.quadrature(2, 1)
    i, j = 1, 3
    f = from_callable(q, lambda pts: sp.matrix(rep, pts)[:, i, j])
    fh = analyze(f, 2)
    b = fh.block(1.5)
    expected = np.zeros((4, 4), dtype=complex)
    expected[j, i] = 1 / 4
    np.testing.assert_allclose(b, expected, atol=1e-13)
    for r, blk in fh.items():
        if r.index != 1.5:
            assert np.max(np.abs(blk)) <= 1e-13


def test_zero_and_character_synthesis():
    sp = get_space("torus:1")
    q = sp.quadrature(2, 2)
    assert np.all(synthesize(SpectralCoefficients(sp, {}), q).values == 0)
    f = synthesize(SpectralCoefficients(sp, {(1,): [[1.0]]}), q)
    np.testing.assert_allclose(f.values, np.exp(1j * q.axes[0]), atol=1e-14)


@pytest.mark.parametrize("space", SPACES)
def test_fast_synthesis_matches_dense_sum(space):
    sp = get_space(space)
    L = 3 if space != "torus:1" else 6
    q = sp.quadrature(L, 2)
    sigma = random_bandlimited(sp, L, 5)
    np.testing.assert_allclose(synthesize(sigma, q).values, dense_synthesis(sigma, q), atol=1e-12)


@pytest.mark.parametrize("space", SPACES)
@pytest.mark.parametrize("L", [0, 1, 5, 16])
def test_round_trip(space, L):
    if space == "torus:2" and L == 16:
        L = 8
    sp = get_space(space)
    sigma = random_bandlimited(sp, L, 17)
    back = analyze(synthesize(sigma, sp.quadrature(L, 1)), L)
    assert back.max_abs_diff(sigma) <= 1e-10


def test_sphere_plancherel_four_reps():
    sp = get_space("sphere2")
    rng = np.random.default_rng(0)
    blocks = {l: rng.standard_normal((1, 2 * l + 1)) + 1j * rng.standard_normal((1, 2 * l + 1)) for l in (0, 2, 3, 5)}
    sigma = SpectralCoefficients(sp, blocks)
    q = sp.quadrature(5, 2)
    f = synthesize(sigma, q)
    lhs = float(np.sum(q.weights * np.abs(f.values) ** 2))
    rhs = sum((2 * l + 1) * np.sum(np.abs(b) ** 2) for l, b in blocks.items())
    assert abs(lhs - rhs) <= 1e-10 * rhs


def test_band_limit_exceeded():
    sp = get_space("sphere2")
    q = sp.quadrature(3, 1)
    with pytest.raises(BandLimitExceeded):
        analyze(constant(q), 8)
    with pytest.raises(BandLimitExceeded):
        synthesize(random_bandlimited(sp, 6, 0), q)


def test_sampled_function_shape_checked():
    q = get_space("torus:1").quadrature(2, 1)
    with pytest.raises(BadParam):
        SampledFunction(q, np.zeros(3))


# ----------------------------------------------------------- coefficients


def test_zero_row_constraint():
    sp = get_space("sphere2")
    bad = np.zeros((3, 3))
    bad[1, 0] = 1
    with pytest.raises(BadParam):
        SpectralCoefficients(sp, {1: bad})
    ok = SpectralCoefficients(sp, {1: np.ones((1, 3))})
    assert ok.block(1).shape == (3, 3)
    assert np.all(ok.block(1)[1:] == 0)


@pytest.mark.parametrize("space", SPACES)
def test_json_round_trip(space):
    sp = get_space(space)
    sigma = random_bandlimited(sp, 2, 4)
    obj = json.loads(sigma.dumps())
    assert set(obj) == {"space", "L", "blocks"}
    assert set(obj["blocks"][0]) == {"rep", "d", "k", "entries_re_im"}
    back = SpectralCoefficients.from_json(obj)
    assert back.max_abs_diff(sigma) == 0


def test_vector_round_trip():
    sp = get_space("su2")
    sigma = random_bandlimited(sp, 1.5, 9)
    v = sigma.to_vector()
    back = SpectralCoefficients.from_vector(sp, sigma.reps, v)
    assert back.max_abs_diff(sigma) == 0


def test_random_determinism_and_constants():
    sp = get_space("sphere2")
    a, b = random_bandlimited(sp, 4, 123), random_bandlimited(sp, 4, 123)
    assert a.max_abs_diff(b) == 0
    c = random_bandlimited(sp, 0, 1)
    assert [r.index for r in c.reps] == [0]


def test_decay_profile_decreasing_on_average():
    sp = get_space("sphere2")
    hs = np.zeros(9)
    for seed in range(100):
        s = random_bandlimited(sp, 8, seed, "decay:2")
        hs += [np.linalg.norm(s.block(l)) for l in range(9)]
    assert np.all(np.diff(hs) < 0)


@settings(max_examples=25, deadline=None)
@given(space=st.sampled_from(SPACES), seed=st.integers(0, 2**32 - 1), L=st.integers(0, 6))
def test_parseval_property(space, seed, L):
    sp = get_space(space)
    if space == "su2":
        L = L / 2
    sigma = random_bandlimited(sp, L, seed)
    q = sp.quadrature(L, 1)
    f = synthesize(sigma, q)
    lhs = float(np.sum(q.weights * np.abs(f.values) ** 2))
    rhs = sum(r.d * np.sum(np.abs(b) ** 2) for r, b in analyze(f, L).items())
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, rhs)

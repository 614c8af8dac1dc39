"""Compact homogeneous spaces: class-I duals, matrix coefficients, quadrature.

Three spaces are built in: the torus ``T^n`` (characters), the sphere ``S^2``
(spherical harmonics, one invariant vector per representation) and ``SU(2)``
(Wigner D-matrices, every vector invariant).

Conventions.  A representation ``pi`` has dimension ``d`` and ``k`` invariant
vectors; its matrix coefficients ``pi_ij`` vanish for columns ``j >= k``.  A
spectral coefficient block ``sigma(pi)`` is ``d x d`` with rows ``>= k`` zero,
and

    f(x) = sum_pi d_pi Tr(sigma(pi) pi(x)),
    fhat(pi)_ji = integral of f conj(pi_ij) dmu,

so that analysis inverts synthesis.  Indices ``i = 0..d-1`` correspond to the
magnetic number ``m = -l + i`` on S^2 and SU(2).
"""

import functools
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BadParam, BandLimitExceeded, UnknownSpec

DEFAULT_OVERSAMPLE = 4


@dataclass(frozen=True)
class RepInfo:
    """Label and dimensions of a class-I representation."""

    index: object
    d: int
    k: int
    degree: float


@dataclass(frozen=True, eq=False)
class Quadrature:
    """Tensor-product quadrature for the normalised invariant measure.

    ``weights`` has the grid shape used for sampled values; ``axes`` holds the
    one-dimensional node arrays in grid order.  Integrals of products of two
    coefficient functions of total degree ``<= exact_degree`` are exact.
    """

    space: "HomogeneousSpace"
    L: float
    oversample: int
    axes: tuple
    weights: np.ndarray
    exact_degree: float

    @property
    def shape(self):
        return self.weights.shape

    @property
    def size(self):
        return self.weights.size

    @property
    def band(self):
        """Largest band limit whose analysis is exact on this grid."""
        return self.space.band_from_degree(self.exact_degree)

    def points(self):
        """Node coordinates, one row per node in ``values.ravel()`` order."""
        return self.space.grid_points(self)

    def refined(self, factor=2):
        return self.space.quadrature(self.L, self.oversample * factor)


@dataclass(eq=False)
class SampledFunction:
    """Values of a function at the nodes of a quadrature."""

    quad: Quadrature
    values: np.ndarray
    band: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.quad.shape:
            raise BadParam(f"expected {self.quad.shape} values, got {self.values.shape}")

    @property
    def space(self):
        return self.quad.space

    @property
    def weights(self):
        return self.quad.weights

    def __mul__(self, c):
        return SampledFunction(self.quad, self.values * c, self.band, self.seed)

    __rmul__ = __mul__

    def __add__(self, other):
        return SampledFunction(self.quad, self.values + other.values, self.band, None)

    def abs_values(self):
        return np.abs(self.values)


class SpectralCoefficients:
    """Finitely supported element of the coefficient space.

    ``blocks`` maps a representation label to a ``d x d`` complex array whose
    rows ``>= k`` are zero; constructing with nonzero rows there raises.
    """

    def __init__(self, space, blocks, L=None):
        self.space = space
        reps = {}
        clean = {}
        for index, block in blocks.items():
            rep = space.rep(index)
            b = np.array(block, dtype=complex)
            if b.shape == (rep.k, rep.d):
                full = np.zeros((rep.d, rep.d), dtype=complex)
                full[: rep.k] = b
                b = full
            if b.shape != (rep.d, rep.d):
                raise BadParam(f"block for {index} has shape {b.shape}, expected {(rep.d, rep.d)}")
            if np.any(b[rep.k:] != 0):
                raise BadParam(f"block for {index} has nonzero rows beyond k={rep.k}")
            reps[rep.index] = rep
            clean[rep.index] = b
        order = sorted(reps, key=lambda i: space.sort_key(reps[i]))
        self.reps = [reps[i] for i in order]
        self.blocks = {i: clean[i] for i in order}
        top = max((r.degree for r in self.reps), default=0)
        self.L = top if L is None else L

    def items(self):
        for rep in self.reps:
            yield rep, self.blocks[rep.index]

    def block(self, index):
        return self.blocks[self.space.rep(index).index]

    def __len__(self):
        return len(self.reps)

    def __mul__(self, c):
        return SpectralCoefficients(self.space, {i: b * c for i, b in self.blocks.items()}, self.L)

    __rmul__ = __mul__

    def __add__(self, other):
        out = {i: b.copy() for i, b in self.blocks.items()}
        for i, b in other.blocks.items():
            out[i] = out[i] + b if i in out else b.copy()
        return SpectralCoefficients(self.space, out, max(self.L, other.L))

    def max_abs_diff(self, other):
        keys = set(self.blocks) | set(other.blocks)
        worst = 0.0
        for i in keys:
            a = self.blocks.get(i)
            b = other.blocks.get(i)
            if a is None:
                a = np.zeros_like(b)
            if b is None:
                b = np.zeros_like(a)
            worst = max(worst, float(np.max(np.abs(a - b))))
        return worst

    def to_vector(self):
        """Real vector of the admissible entries (rows ``< k``), re then im."""
        parts = [self.blocks[r.index][: r.k].ravel() for r in self.reps]
        z = np.concatenate(parts) if parts else np.zeros(0, dtype=complex)
        return np.concatenate([z.real, z.imag])

    @classmethod
    def from_vector(cls, space, reps, vec, L=None):
        vec = np.asarray(vec, dtype=float)
        n = vec.size // 2
        z = vec[:n] + 1j * vec[n:]
        blocks = {}
        pos = 0
        for r in reps:
            size = r.k * r.d
            blocks[r.index] = z[pos:pos + size].reshape(r.k, r.d)
            pos += size
        if pos != n:
            raise BadParam(f"vector has {n} complex entries, representations need {pos}")
        return cls(space, blocks, L)

    def to_json(self):
        blocks = []
        for rep, b in self.items():
            rows = [[[float(v.real), float(v.imag)] for v in row] for row in b[: rep.k]]
            blocks.append({"rep": self.space.index_to_json(rep.index), "d": rep.d, "k": rep.k, "entries_re_im": rows})
        return {"space": self.space.name, "L": self.L, "blocks": blocks}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        space = get_space(obj["space"])
        blocks = {}
        for b in obj["blocks"]:
            arr = np.array(b["entries_re_im"], dtype=float)
            blocks[space.index_from_json(b["rep"])] = arr[..., 0] + 1j * arr[..., 1]
        return cls(space, blocks, obj["L"])


# --------------------------------------------------------------------------


class HomogeneousSpace:
    name = ""

    def reps(self, L):
        raise NotImplementedError

    def rep(self, index):
        raise NotImplementedError

    def sort_key(self, rep):
        return rep.degree

    def quadrature(self, L, oversample=DEFAULT_OVERSAMPLE):
        raise NotImplementedError

    def band_from_degree(self, degree):
        return math.floor(degree / 2)

    def matrix(self, rep, points):
        """``pi(x)`` at each point: array ``(n, d, d)``, columns ``>= k`` zero."""
        raise NotImplementedError

    def grid_points(self, quad):
        mesh = np.meshgrid(*quad.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def coeff(self, rep, i, j, point):
        return complex(self.matrix(rep, np.atleast_2d(point))[0, i, j])

    def index_to_json(self, index):
        return index

    def index_from_json(self, value):
        return value

    def parse_reps(self, spec):
        """Resolve ``band:L``, ``first:N`` or ``reps:a;b;...`` to a list of RepInfo."""
        kind, _, arg = spec.partition(":")
        if kind == "band":
            return self.reps(float(arg))
        if kind == "first":
            n = int(arg)
            out = []
            L = 0
            while len(out) < n:
                out = self.reps(L)
                L += self.band_step
            return out[:n]
        if kind == "reps":
            return [self.rep(self.parse_index(tok)) for tok in arg.split(";") if tok]
        raise UnknownSpec(f"unknown representation set {spec!r}")

    band_step = 1

    def parse_index(self, token):
        return json.loads(token)

    def __repr__(self):
        return f"<{self.name}>"

    # transforms are implemented per space on the full grid
    def synthesize_grid(self, sigma, quad):
        raise NotImplementedError

    def analyze_grid(self, values, quad, reps):
        raise NotImplementedError


class Torus(HomogeneousSpace):
    """``T^n`` with characters ``exp(i n.theta)``; d = k = 1."""

    def __init__(self, dim=1):
        if dim < 1:
            raise BadParam("torus dimension must be >= 1")
        self.dim = int(dim)
        self.name = f"torus:{self.dim}"

    def rep(self, index):
        n = tuple(int(v) for v in np.atleast_1d(index))
        if len(n) != self.dim:
            raise BadParam(f"torus:{self.dim} label needs {self.dim} entries, got {index!r}")
        return RepInfo(n, 1, 1, float(max((abs(v) for v in n), default=0)))

    def sort_key(self, rep):
        return (rep.degree, rep.index)

    def reps(self, L):
        L = int(math.floor(L))
        grid = itertools.product(range(-L, L + 1), repeat=self.dim)
        return sorted((self.rep(n) for n in grid), key=self.sort_key)

    def index_to_json(self, index):
        return list(index)

    def index_from_json(self, value):
        return tuple(value)

    def parse_index(self, token):
        return tuple(int(v) for v in token.split(","))

    def quadrature(self, L, oversample=DEFAULT_OVERSAMPLE):
        n = 2 * oversample * int(math.ceil(L)) + 1
        axis = 2.0 * np.pi * np.arange(n) / n
        w = np.full((n,) * self.dim, 1.0 / n ** self.dim)
        return Quadrature(self, L, oversample, (axis,) * self.dim, w, n - 1)

    def matrix(self, rep, points):
        pts = np.atleast_2d(points)
        phase = pts @ np.array(rep.index, dtype=float)
        return np.exp(1j * phase)[:, None, None]

    def _bins(self, quad, reps):
        n = quad.shape[0]
        return tuple(np.array([r.index[a] % n for r in reps]) for a in range(self.dim))

    def synthesize_grid(self, sigma, quad):
        spec = np.zeros(quad.shape, dtype=complex)
        if len(sigma):
            spec[self._bins(quad, sigma.reps)] = [b[0, 0] for _, b in sigma.items()]
        return np.fft.ifftn(spec) * quad.size

    def analyze_grid(self, values, quad, reps):
        spec = np.fft.fftn(values) / quad.size
        vals = spec[self._bins(quad, reps)]
        return {r.index: np.array([[v]]) for r, v in zip(reps, vals)}


def gauss_legendre(n):
    return np.polynomial.legendre.leggauss(n)


def normalized_legendre(lmax, x):
    """Orthonormal associated Legendre functions ``P[l, m, :]`` for ``0 <= m <= l``.

    Normalised so that ``P[l, m](cos t) exp(i m p)`` is the unit-norm spherical
    harmonic on the sphere of area 4 pi (Condon-Shortley phase included).
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    P = np.zeros((lmax + 1, lmax + 1, x.size))
    P[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, lmax + 1):
        P[m, m] = -math.sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * P[m - 1, m - 1]
    for m in range(lmax):
        P[m + 1, m] = math.sqrt(2.0 * m + 3.0) * x * P[m, m]
    for m in range(lmax + 1):
        for l in range(m + 2, lmax + 1):
            a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            P[l, m] = a * (x * P[l - 1, m] - b * P[l - 2, m])
    return P


class Sphere2(HomogeneousSpace):
    """``S^2 = SO(3)/SO(2)``: integer l, d = 2l + 1, k = 1.

    ``pi_{i0}(theta, phi) = sqrt(4 pi / (2l+1)) Y_l^m(theta, phi)``, ``m = i - l``.
    Points are ``(theta, phi)``.
    """

    name = "sphere2"

    def rep(self, index):
        l = int(index)
        if l < 0 or l != index:
            raise BadParam(f"sphere2 labels are integers >= 0, got {index!r}")
        return RepInfo(l, 2 * l + 1, 1, float(l))

    def reps(self, L):
        return [self.rep(l) for l in range(int(math.floor(L)) + 1)]

    def parse_index(self, token):
        return int(token)

    def quadrature(self, L, oversample=DEFAULT_OVERSAMPLE):
        Lc = int(math.ceil(L))
        nt = oversample * (Lc + 1)
        nph = 2 * oversample * Lc + 1
        x, w = gauss_legendre(nt)
        theta = np.arccos(x)
        phi = 2.0 * np.pi * np.arange(nph) / nph
        weights = np.outer(w / 2.0, np.full(nph, 1.0 / nph))
        return Quadrature(self, L, oversample, (theta, phi), weights, min(2 * nt - 1, nph - 1))

    @staticmethod
    @functools.lru_cache(maxsize=16)
    def _legendre_table(lmax, cos_key):
        return normalized_legendre(lmax, np.array(cos_key))

    def _table(self, lmax, theta):
        return self._legendre_table(lmax, tuple(np.cos(theta)))

    def matrix(self, rep, points):
        pts = np.atleast_2d(points)
        l = rep.index
        P = normalized_legendre(l, np.cos(pts[:, 0]))[l]
        out = np.zeros((pts.shape[0], rep.d, rep.d), dtype=complex)
        c = math.sqrt(4.0 * math.pi / (2 * l + 1))
        for m in range(-l, l + 1):
            val = P[abs(m)] * (-1.0) ** m if m < 0 else P[m]
            out[:, m + l, 0] = c * val * np.exp(1j * m * pts[:, 1])
        return out

    def synthesize_grid(self, sigma, quad):
        theta, phi = quad.axes
        nph = phi.size
        if not len(sigma):
            return np.zeros(quad.shape, dtype=complex)
        lmax = int(max(r.index for r in sigma.reps))
        P = self._table(lmax, theta)
        spec = np.zeros((theta.size, nph), dtype=complex)
        for rep, b in sigma.items():
            l = rep.index
            c = (2 * l + 1) * math.sqrt(4.0 * math.pi / (2 * l + 1))
            for m in range(-l, l + 1):
                coef = b[0, m + l]
                if coef == 0:
                    continue
                leg = P[l, abs(m)] * ((-1.0) ** m if m < 0 else 1.0)
                spec[:, m % nph] += c * coef * leg
        return np.fft.ifft(spec, axis=1) * nph

    def analyze_grid(self, values, quad, reps):
        theta, phi = quad.axes
        nph = phi.size
        lmax = int(max((r.index for r in reps), default=0))
        P = self._table(lmax, theta)
        wt = quad.weights[:, 0] * nph
        rows = np.fft.fft(values, axis=1) / nph
        out = {}
        for rep in reps:
            l = rep.index
            c = math.sqrt(4.0 * math.pi / (2 * l + 1))
            b = np.zeros((rep.d, rep.d), dtype=complex)
            for m in range(-l, l + 1):
                leg = P[l, abs(m)] * ((-1.0) ** m if m < 0 else 1.0)
                b[0, m + l] = c * np.dot(wt * leg, rows[:, m % nph])
            out[l] = b
        return out


@functools.lru_cache(maxsize=256)
def _jy_eig(two_l):
    """Eigen-decomposition of the y angular-momentum matrix for spin ``two_l/2``."""
    l = two_l / 2.0
    m = -l + np.arange(two_l + 1)
    up = np.sqrt(l * (l + 1) - m[:-1] * (m[:-1] + 1))
    jp = np.diag(up, -1)
    jy = (jp - jp.T) / 2j
    return np.linalg.eigh(jy)


def wigner_small_d(l, beta):
    """Wigner ``d^l_{mn}(beta)`` for each beta: array ``(len(beta), 2l+1, 2l+1)``.

    Computed as ``exp(-i beta J_y)`` from the spectral decomposition of ``J_y``.
    """
    two_l = int(round(2 * l))
    lam, V = _jy_eig(two_l)
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    ph = np.exp(-1j * beta[:, None] * lam[None, :])
    d = np.einsum("ij,bj,kj->bik", V, ph, V.conj())
    return d.real


class SU2(HomogeneousSpace):
    """``SU(2)`` (trivial isotropy): spin l in (1/2)Z, d = k = 2l + 1.

    ``pi_ij(alpha, beta, gamma) = exp(-i m alpha) d^l_{mn}(beta) exp(-i n gamma)``
    with ``m = i - l``, ``n = j - l``.  Points are ``(alpha, beta, gamma)``; the
    quadrature samples ``alpha, gamma`` on ``[0, 4 pi)`` so that half-integer
    spins are periodic.
    """

    name = "su2"
    band_step = 0.5

    def rep(self, index):
        two_l = round(2 * float(index))
        if two_l < 0 or abs(two_l - 2 * float(index)) > 1e-12:
            raise BadParam(f"su2 labels are nonnegative half-integers, got {index!r}")
        l = two_l / 2.0
        return RepInfo(l, two_l + 1, two_l + 1, l)

    def reps(self, L):
        return [self.rep(t / 2.0) for t in range(int(math.floor(2 * L + 1e-9)) + 1)]

    def parse_index(self, token):
        return float(token)

    def band_from_degree(self, degree):
        return math.floor(degree) / 2.0

    def quadrature(self, L, oversample=DEFAULT_OVERSAMPLE):
        Lc = int(math.ceil(L))
        nb = oversample * (Lc + 1)
        na = 4 * oversample * Lc + 1
        x, w = gauss_legendre(nb)
        beta = np.arccos(x)
        ang = 4.0 * np.pi * np.arange(na) / na
        weights = (w / 2.0)[:, None, None] * np.full((1, na, na), 1.0 / (na * na))
        # grid order is (beta, alpha, gamma)
        return Quadrature(self, L, oversample, (beta, ang, ang), weights, min(2 * nb - 1, (na - 1) / 2.0))

    @staticmethod
    @functools.lru_cache(maxsize=512)
    def _d_table(two_l, beta_key):
        return wigner_small_d(two_l / 2.0, np.array(beta_key))

    def _dtab(self, rep, beta):
        return self._d_table(rep.d - 1, tuple(beta))

    def matrix(self, rep, points):
        pts = np.atleast_2d(points)
        alpha, beta, gamma = pts[:, 0], pts[:, 1], pts[:, 2]
        m = -rep.index + np.arange(rep.d)
        d = wigner_small_d(rep.index, beta)
        return np.exp(-1j * m[None, :, None] * alpha[:, None, None]) * d * np.exp(-1j * m[None, None, :] * gamma[:, None, None])

    def grid_points(self, quad):
        beta, alpha, gamma = quad.axes
        B, A, G = np.meshgrid(beta, alpha, gamma, indexing="ij")
        return np.stack([A.ravel(), B.ravel(), G.ravel()], axis=1)

    def _bins(self, rep, n):
        m = -rep.index + np.arange(rep.d)
        return np.rint(2 * m).astype(int) % n

    def synthesize_grid(self, sigma, quad):
        beta, alpha, _ = quad.axes
        na = alpha.size
        H = np.zeros(quad.shape, dtype=complex)
        for rep, b in sigma.items():
            G = rep.d * b.T[None, :, :] * self._dtab(rep, beta)
            bins = self._bins(rep, na)
            H[:, bins[:, None], bins[None, :]] += G
        return np.fft.fft2(H, axes=(1, 2))

    def analyze_grid(self, values, quad, reps):
        beta, alpha, _ = quad.axes
        na = alpha.size
        S = np.fft.ifft2(values, axes=(1, 2))
        wb = quad.weights[:, 0, 0] * na * na
        out = {}
        for rep in reps:
            bins = self._bins(rep, na)
            blk = S[:, bins[:, None], bins[None, :]]
            out[rep.index] = np.einsum("b,bmn,bmn->mn", wb, self._dtab(rep, beta), blk).T
        return out


# --------------------------------------------------------------------------


def _check_band(quad, L):
    if L > quad.band + 1e-12:
        raise BandLimitExceeded(f"band {L} exceeds the exact band {quad.band} of this quadrature")


def synthesize(sigma, quad):
    """Evaluate ``sum d_pi Tr(sigma(pi) pi(x))`` at the quadrature nodes."""
    if sigma.space.name != quad.space.name:
        raise BadParam(f"coefficients live on {sigma.space.name}, quadrature on {quad.space.name}")
    top = max((r.degree for r in sigma.reps), default=0.0)
    _check_band(quad, top)
    return SampledFunction(quad, quad.space.synthesize_grid(sigma, quad), band=top)


def analyze(f, L=None):
    """Fourier coefficients ``fhat(pi)`` for every class-I ``pi`` up to band ``L``."""
    quad = f.quad
    if L is None:
        L = f.band if f.band is not None else quad.band
    _check_band(quad, L)
    reps = quad.space.reps(L)
    return SpectralCoefficients(quad.space, quad.space.analyze_grid(f.values, quad, reps), L)


def analyze_reps(f, reps):
    quad = f.quad
    top = max((r.degree for r in reps), default=0.0)
    _check_band(quad, top)
    return SpectralCoefficients(quad.space, quad.space.analyze_grid(f.values, quad, list(reps)), top)


def from_callable(quad, fn):
    """Sample ``fn(points)`` (points as rows) on the quadrature nodes."""
    vals = np.asarray(fn(quad.points()), dtype=complex)
    return SampledFunction(quad, vals.reshape(quad.shape))


def constant(quad, c=1.0):
    return SampledFunction(quad, np.full(quad.shape, c, dtype=complex), band=0.0)


def parse_profile(profile):
    if profile in (None, "flat"):
        return 0.0
    kind, _, arg = str(profile).partition(":")
    if kind != "decay":
        raise UnknownSpec(f"unknown spectral profile {profile!r}")
    return float(arg)


def random_coefficients(space, reps, rng, profile="flat"):
    """Independent complex Gaussians on admissible entries, scaled by ``(1+degree)^-s``."""
    s = parse_profile(profile)
    blocks = {}
    for rep in reps:
        z = rng.standard_normal((rep.k, rep.d)) + 1j * rng.standard_normal((rep.k, rep.d))
        blocks[rep.index] = z * (math.sqrt(0.5) * (1.0 + rep.degree) ** (-s))
    top = max((r.degree for r in reps), default=0.0)
    return SpectralCoefficients(space, blocks, top)


def random_bandlimited(space, L, seed, profile="flat"):
    rng = np.random.default_rng(seed)
    return random_coefficients(space, space.reps(L), rng, profile)


# --------------------------------------------------------------------------

_SPACES = {}


def get_space(spec):
    """Resolve ``"torus:n"``, ``"sphere2"`` or ``"su2"``."""
    if isinstance(spec, HomogeneousSpace):
        return spec
    spec = str(spec).strip()
    if spec not in _SPACES:
        name, _, arg = spec.partition(":")
        if name == "torus":
            _SPACES[spec] = Torus(int(arg) if arg else 1)
        elif name in ("sphere2", "s2"):
            _SPACES[spec] = Sphere2()
        elif name == "su2":
            _SPACES[spec] = SU2()
        else:
            raise UnknownSpec(f"unknown space {spec!r}")
    return _SPACES[spec]


LISTED_SPACES = ["sphere2", "su2", "torus:1", "torus:2"]

"""Orlicz-space Hausdorff-Young inequalities on compact homogeneous spaces.

Young-function calculus, Fourier analysis on the torus, the 2-sphere and
SU(2), gauge norms on both sides of the Fourier transform, and a numerical
harness that checks the associated inequalities.
"""

from .errors import (
    BadExponent,
    BadParam,
    BandLimitExceeded,
    BracketOverflow,
    HypothesisFailed,
    NoFit,
    NonConvexInput,
    NonFiniteModular,
    NoRoot,
    OrliczError,
    UnknownSpec,
)
from .kernels import BACKEND
from .norms import (
    DualProfile,
    NormResult,
    dual_lp,
    dual_orlicz,
    dual_schatten,
    luxemburg,
    modular,
    norm_from_spec,
    orlicz_norm,
    profile,
)
from .spaces import (
    HomogeneousSpace,
    Quadrature,
    RepInfo,
    SampledFunction,
    SpectralCoefficients,
    analyze,
    get_space,
    random_bandlimited,
    synthesize,
)
from .verify import (
    RatioSearchResult,
    VerificationReport,
    growth_fit,
    ratio_search,
    verify_embeddings,
    verify_hoelder,
    verify_hy_lp,
    verify_hy_orlicz,
    verify_parseval,
)
from .young import (
    ComplementaryPair,
    OrderingWitness,
    YoungFunction,
    builtin,
    check_delta2,
    check_order,
    conjugate,
    from_spec,
    normalize_pair,
    pair_from_spec,
)

__version__ = "0.1.0"

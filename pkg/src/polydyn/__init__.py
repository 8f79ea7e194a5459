"""Dynamical invariants of complex and rational polynomials.

Green functions, Böttcher coordinates, Lyapunov exponents (three
estimators), multiplier spectra, canonical and critical heights, and exact
intertwining witnesses. Hot loops run in a compiled Cython core when it is
available and in numpy otherwise; see :data:`BACKEND`.
"""

from ._core import BACKEND, get_backend
from .bottcher import BottcherSeries, bottcher_eval, bottcher_series, conjugation_zeta
from .errors import (
    BudgetExhausted,
    DegreeBudgetExceeded,
    IllConditionedWarning,
    IrrationalCriticalPoints,
    NoConvergence,
    NotBracketed,
    NotPeriodic,
    OutsideDomain,
    ParseError,
    PolydynError,
    RelationViolated,
    RootFindingFailed,
    WitnessInvalid,
)
from .escape import GreenValue, escape_radius, green, in_filled_julia, julia_connectivity
from .heights import canonical_height, critical_height, is_preperiodic, local_height, weil_height
from .intertwine import (
    IntertwiningWitness,
    check_semiconjugacy,
    make_intertwined_pair,
    verify_rigidity_if_direction,
)
from .lyapunov import LyapunovEstimate, lyap_ergodic, lyap_przytycki, lyap_spectral, unicritical_solve
from .parser import parse_poly
from .poly import (
    AffineMap,
    ComplexPoly,
    LaurentPoly,
    RationalPoly,
    chebyshev,
    compose,
    conjugate_by,
    critical_points,
    evaluate,
    format_coefficients,
    format_expression,
    iterate,
    monic_centered,
)
from .rootfind import Root, RootSet, all_roots, periodic_roots, preimages
from .spectra import SpectrumLevel, minimal_period, multiplier, multiset_distance, periodic_points, spectrum

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "get_backend",
    "BottcherSeries",
    "bottcher_eval",
    "bottcher_series",
    "conjugation_zeta",
    "BudgetExhausted",
    "DegreeBudgetExceeded",
    "IllConditionedWarning",
    "IrrationalCriticalPoints",
    "NoConvergence",
    "NotBracketed",
    "NotPeriodic",
    "OutsideDomain",
    "ParseError",
    "PolydynError",
    "RelationViolated",
    "RootFindingFailed",
    "WitnessInvalid",
    "GreenValue",
    "escape_radius",
    "green",
    "in_filled_julia",
    "julia_connectivity",
    "canonical_height",
    "critical_height",
    "is_preperiodic",
    "local_height",
    "weil_height",
    "IntertwiningWitness",
    "check_semiconjugacy",
    "make_intertwined_pair",
    "verify_rigidity_if_direction",
    "LyapunovEstimate",
    "lyap_ergodic",
    "lyap_przytycki",
    "lyap_spectral",
    "unicritical_solve",
    "parse_poly",
    "AffineMap",
    "ComplexPoly",
    "LaurentPoly",
    "RationalPoly",
    "chebyshev",
    "compose",
    "conjugate_by",
    "critical_points",
    "evaluate",
    "format_coefficients",
    "format_expression",
    "iterate",
    "monic_centered",
    "Root",
    "RootSet",
    "all_roots",
    "periodic_roots",
    "preimages",
    "SpectrumLevel",
    "minimal_period",
    "multiplier",
    "multiset_distance",
    "periodic_points",
    "spectrum",
]

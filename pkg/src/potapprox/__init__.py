"""Potential theory and minimax polynomial approximation on interval unions.

The package computes, for compact sets E that are finite unions of real
intervals: the equilibrium measure and its density, logarithmic capacity,
the Green's function of the complement, the conformal map onto a comb
half-strip, best uniform polynomial approximation errors of |x - x0|^alpha
by Remez exchange, scaled-error limits (Bernstein constants and the
Vasiliev-Totik identity), and a suite of verified growth bounds tying the
approximation rates to the Lipschitz behavior of the Green's function.
"""

from .errors import NumericsError, PotapproxError, VerificationError
from .intervals import (
    ExhaustionSequence,
    IntervalSet,
    cantor_exhaustion,
    chebyshev_grid,
    normalize,
    parse_bands,
)
from .equilibrium import (
    EquilibriumData,
    capacity_of,
    density_at,
    green_at,
    mass_of,
    solve_equilibrium,
)
from .comb_map import (
    CombGeometry,
    CombIdentityReport,
    F_at,
    check_comb_identities,
    comb_geometry,
    h_at,
)
from .minimax import (
    MinimaxProblem,
    MinimaxResult,
    en_sequence,
    eval_poly,
    remez,
)
from .asymptotics import (
    DEFAULT_DEGREES,
    RateReport,
    VTReport,
    extrapolate_rate,
    sigma_alpha,
    vt_check,
)
from .verification import (
    CheckResult,
    ConstantsLedger,
    DichotomyReport,
    ExhaustionGreenReport,
    SetReport,
    base_growth_check,
    build_constants,
    dichotomy_report,
    exhaustion_green_check,
    farfield_check,
    lipschitz_sup,
    random_interval_sets,
    tooth_aspect_check,
    tooth_height_check,
    verify_set,
)

__version__ = "0.1.0"

__all__ = [
    "PotapproxError",
    "NumericsError",
    "VerificationError",
    "IntervalSet",
    "ExhaustionSequence",
    "normalize",
    "parse_bands",
    "chebyshev_grid",
    "cantor_exhaustion",
    "EquilibriumData",
    "solve_equilibrium",
    "density_at",
    "mass_of",
    "capacity_of",
    "green_at",
    "CombGeometry",
    "CombIdentityReport",
    "comb_geometry",
    "h_at",
    "F_at",
    "check_comb_identities",
    "MinimaxProblem",
    "MinimaxResult",
    "remez",
    "en_sequence",
    "eval_poly",
    "DEFAULT_DEGREES",
    "RateReport",
    "VTReport",
    "extrapolate_rate",
    "sigma_alpha",
    "vt_check",
    "ConstantsLedger",
    "CheckResult",
    "SetReport",
    "build_constants",
    "tooth_height_check",
    "tooth_aspect_check",
    "base_growth_check",
    "lipschitz_sup",
    "farfield_check",
    "exhaustion_green_check",
    "ExhaustionGreenReport",
    "dichotomy_report",
    "DichotomyReport",
    "random_interval_sets",
    "verify_set",
]

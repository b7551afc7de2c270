"""Rate limits n^alpha * E_n and the Vasiliev-Totik identity.

For alpha > 0 not an even integer the scaled errors n^alpha * E_n on
[-1, 1] with pole at the origin converge to a finite positive limit
sigma_alpha (the Bernstein constant of the exponent); on a general
interval union with interior pole x0 the limit is h(x0)^(-alpha) *
sigma_alpha, where h is the comb-map stretching factor pi * density.
This module estimates both sides numerically and reports their gap.

Limits are extrapolated by least squares against L + a/n + b/n^2, which
matches the observed decay of the Remez ladders; no literature value of
sigma_alpha is ever asserted, the internal ladder is the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .comb_map import h_at
from .equilibrium import solve_equilibrium
from .intervals import IntervalSet
from .minimax import en_sequence

__all__ = [
    "DEFAULT_DEGREES",
    "RateReport",
    "VTReport",
    "extrapolate_rate",
    "sigma_alpha",
    "vt_check",
]

# geometric-flavored ladder balancing Remez cost against fit accuracy
DEFAULT_DEGREES = (20, 28, 40, 56, 80, 112)


def _reject_even_integer(alpha: float) -> None:
    if abs(alpha - 2.0 * round(alpha / 2.0)) < 1e-12:
        raise ValueError(
            "alpha is an even integer: E_n vanishes once n >= alpha and the "
            "rate limit degenerates"
        )


@dataclass(frozen=True)
class RateReport:
    """Scaled-error ladder with its extrapolated limit.

    limsup_estimate is the largest ladder value over the trailing half of
    the samples, a finite-n stand-in for the limsup.
    """

    alpha: float
    x0: float
    samples: tuple[tuple[int, float], ...]
    extrapolated_limit: float
    limsup_estimate: float
    fit_residual: float


@dataclass(frozen=True)
class VTReport:
    """Both sides of the rate identity and their gap relative to sigma."""

    alpha: float
    x0: float
    lhs_samples: tuple[tuple[int, float], ...]
    lhs_limit: float
    h_value: float
    sigma: RateReport
    rhs: float
    relative_gap: float


def extrapolate_rate(samples) -> tuple[float, float]:
    """Fit value(n) = L + a/n + b/n^2 and return (L, RMS residual)."""
    samples = [(int(n), float(v)) for n, v in samples]
    ns = np.array([n for n, _ in samples], dtype=float)
    vals = np.array([v for _, v in samples])
    if len(np.unique(ns)) < 4:
        raise ValueError("need at least 4 samples at distinct degrees")
    design = np.column_stack([np.ones_like(ns), 1.0 / ns, 1.0 / ns**2])
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    fit = design @ coef
    residual = float(np.sqrt(np.mean((fit - vals) ** 2)))
    return float(coef[0]), residual


def _rate_report(alpha, x0, errors) -> RateReport:
    samples = tuple((n, n**alpha * e) for n, e in errors)
    values = [v for _, v in samples]
    if len(samples) >= 4:
        limit, resid = extrapolate_rate(samples)
    else:
        limit, resid = values[-1], float("nan")
    tail = values[len(values) // 2 :]
    return RateReport(
        alpha=alpha,
        x0=x0,
        samples=samples,
        extrapolated_limit=limit,
        limsup_estimate=max(tail),
        fit_residual=resid,
    )


def sigma_alpha(
    alpha: float,
    degrees=DEFAULT_DEGREES,
    grid_points_per_band: int | None = None,
    tol: float = 1e-12,
) -> RateReport:
    """Bernstein constant ladder on [-1, 1] with the pole at the origin.

    Only even degrees are admitted: the target function is even, so odd
    degrees repeat the previous error and the 1/n fit model would see
    stairs.
    """
    _reject_even_integer(alpha)
    degrees = [int(d) for d in degrees]
    if any(d % 2 for d in degrees):
        raise ValueError("sigma_alpha requires even degrees (even target)")
    E = IntervalSet(((-1.0, 1.0),))
    errors = en_sequence(
        E, 0.0, alpha, degrees, grid_points_per_band=grid_points_per_band, tol=tol
    )
    return _rate_report(alpha, 0.0, errors)


def vt_check(
    E: IntervalSet,
    x0: float,
    alpha: float,
    degrees=DEFAULT_DEGREES,
    quad_points: int = 256,
    grid_points_per_band: int | None = None,
    tol: float = 1e-12,
) -> VTReport:
    """Compare lim n^alpha E_n(E, x0) against h(x0)^(-alpha) * sigma_alpha.

    The left side is extrapolated from a Remez ladder on E; the right side
    combines the stretching factor at x0 with the internal sigma ladder
    (run on the even roundings of the same degrees).  The gap is reported
    relative to sigma, matching how the identity is normally normalized.
    """
    _reject_even_integer(alpha)
    if not E.interior_contains(x0):
        raise ValueError(f"x0 = {x0} must be interior to the set")
    degrees = [int(d) for d in degrees]
    errors = en_sequence(
        E, x0, alpha, degrees, grid_points_per_band=grid_points_per_band, tol=tol
    )
    lhs = _rate_report(alpha, x0, errors)
    even = sorted({d if d % 2 == 0 else d + 1 for d in degrees})
    sigma = sigma_alpha(
        alpha, even, grid_points_per_band=grid_points_per_band, tol=tol
    )
    eq = solve_equilibrium(E, quad_points)
    h = h_at(eq, x0)
    rhs = h ** (-alpha) * sigma.extrapolated_limit
    gap = abs(lhs.extrapolated_limit - rhs) / sigma.extrapolated_limit
    return VTReport(
        alpha=alpha,
        x0=x0,
        lhs_samples=lhs.samples,
        lhs_limit=lhs.extrapolated_limit,
        h_value=h,
        sigma=sigma,
        rhs=rhs,
        relative_gap=gap,
    )

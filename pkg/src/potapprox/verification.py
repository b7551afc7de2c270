"""Numerical verification of the potential-theoretic bound chain.

For a set E inside [-1, 1] and an interior base point x0 we fix a control
constant

    c = max(2 + s, h(x0), (1 + s)/cap(E)),    s = 1e-4,

so that h(x0) <= c and cap(E) > 1/c hold with slack, and derive from it

    c1 = 4*pi + log(2c)
    c2 = log(c^2/c1)/pi + 7
    c3 = 4*exp(3*pi*c2)
    c5 = c2 + 4 + 2*pi*c3^2
    c4 = ((c1 + 1)/c) * exp(pi*c5).

The chain controls, in order: the Green value at the reference height
z0 = x0 + 2c*e^(4*pi)*i (sandwiched strictly between c1 and 2*c1), the
modulus of crosscut families around the comb base point, the aspect ratio
of comb teeth seen from the base image, and finally the linear growth of
both the comb map and the Green's function near x0.  Every check here is a
proved inequality for the admissible geometry, so a failure is reported as
a VerificationError: it can only mean an evaluator defect.

Note on magnitudes: c3 is astronomically large (about 1e27 for c near 2)
and c5 therefore reaches 1e55, so c4 = exp(pi*c5) overflows IEEE doubles
for every admissible c.  The ledger stores c4 as +inf together with its
exact logarithm, and all growth comparisons run in log space.

The module also hosts the quantities used to exhibit the rate dichotomy:
the Lipschitz quotient sup g(z)/|z - x0| estimated from below by sampling,
the monotone convergence of Green's functions along nested exhaustions,
and the far-field bound g(z) <= log(2c|z - x0|).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .comb_map import CombGeometry, F_at, comb_geometry, h_at
from .equilibrium import EquilibriumData, green_at, solve_equilibrium
from .errors import VerificationError
from .intervals import ExhaustionSequence, IntervalSet
from .minimax import en_sequence

__all__ = [
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

SAFETY = 1e-4
Z0_HEIGHT = 2.0 * math.exp(4.0 * math.pi)  # times c, above x0


@dataclass(frozen=True)
class ConstantsLedger:
    """The constant chain and the reference-point data derived from it.

    c4 overflows doubles and is stored as +inf; log_c4 carries the exact
    value for log-space comparisons.  R0 approximates the comb distance
    |F(z0) - eta0| using Re F(z0) ~ pi/2, which holds to O(1/|z0|) at the
    reference height.
    """

    c: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    log_c4: float
    z0: complex
    w0_im: float
    R0: float

    @property
    def sandwich_margin(self) -> float:
        """min(w0_im - c1, 2*c1 - w0_im); positive when the sandwich holds."""
        return min(self.w0_im - self.c1, 2.0 * self.c1 - self.w0_im)


def derive_chain(c: float) -> tuple[float, float, float, float, float, float]:
    """Pure arithmetic: (c1, c2, c3, c4, c5, log_c4) from c."""
    c1 = 4.0 * math.pi + math.log(2.0 * c)
    c2 = math.log(c * c / c1) / math.pi + 7.0
    c3 = 4.0 * math.exp(3.0 * math.pi * c2)
    c5 = c2 + 4.0 + 2.0 * math.pi * c3 * c3
    log_c4 = math.log((c1 + 1.0) / c) + math.pi * c5
    with np.errstate(over="ignore"):
        c4 = float(np.exp(np.float64(log_c4)))
    return c1, c2, c3, c4, c5, log_c4


def _require_unit_carrier(E: IntervalSet) -> None:
    lo, hi = E.carrier
    if lo < -1.0 - 1e-12 or hi > 1.0 + 1e-12:
        raise ValueError(
            "verification bounds assume the set lies inside [-1, 1]; "
            "rescale the problem first (all quantities are affinely covariant)"
        )


def build_constants(
    eq: EquilibriumData, geom: CombGeometry, x0: float
) -> ConstantsLedger:
    """Build the ledger and assert the strict sandwich c1 < Im F(z0) < 2*c1.

    Im F(z0) is evaluated through the Green's function (the two agree
    identically), which stays accurate at the enormous reference height
    where path integration would be wasteful.
    """
    E = eq.set
    _require_unit_carrier(E)
    if not E.interior_contains(x0):
        raise ValueError(f"x0 = {x0} must be interior to the set")
    h = h_at(eq, x0)
    cap = eq.capacity
    c = max(2.0 + SAFETY, h, (1.0 + SAFETY) / cap)
    c1, c2, c3, c4, c5, log_c4 = derive_chain(c)
    if not (c > 2.0 and h <= c and cap > 1.0 / c):
        raise VerificationError(
            f"control constant construction failed: c={c!r} h={h!r} cap={cap!r}"
        )
    z0 = complex(x0, Z0_HEIGHT * c)
    w0_im = green_at(eq, z0)
    if not c1 < w0_im < 2.0 * c1:
        raise VerificationError(
            f"reference Green value escaped its sandwich: "
            f"c1={c1!r} Im F(z0)={w0_im!r} 2*c1={2 * c1!r}"
        )
    R0 = math.hypot(w0_im, 0.5 * math.pi - geom.eta0)
    return ConstantsLedger(
        c=c, c1=c1, c2=c2, c3=c3, c4=c4, c5=c5, log_c4=log_c4,
        z0=z0, w0_im=w0_im, R0=R0,
    )


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verified inequality: worst margin and context."""

    name: str
    passed: bool
    margin: float
    detail: dict = field(default_factory=dict)


def tooth_height_check(geom: CombGeometry, ledger: ConstantsLedger) -> CheckResult:
    """Every tooth height must stay below log(2c); vacuous for one band."""
    bound = math.log(2.0 * ledger.c)
    worst = max(geom.v) if geom.v else 0.0
    return CheckResult(
        name="tooth_height",
        passed=worst < bound,
        margin=bound - worst,
        detail={"bound": bound, "max_height": worst},
    )


def tooth_aspect_check(geom: CombGeometry, ledger: ConstantsLedger) -> CheckResult:
    """Aspect of each tooth from the base image: hypot(du, v)/|du| <= c3."""
    worst = 0.0
    for uj, vj in zip(geom.u[1:-1], geom.v):
        du = abs(geom.eta0 - uj)
        worst = max(worst, math.hypot(du, vj) / du)
    return CheckResult(
        name="tooth_aspect",
        passed=worst <= ledger.c3,
        margin=ledger.c3 - worst,
        detail={"bound": ledger.c3, "max_ratio": worst},
    )


def base_growth_check(
    eq: EquilibriumData,
    geom: CombGeometry,
    ledger: ConstantsLedger,
    sample_count: int = 60,
    angles: int = 4,
) -> CheckResult:
    """Linear growth near the base point, for the map and for Green.

    Samples z = x0 + r*e^(i*theta) on log-spaced circles with radii in
    [1e-6, 2c) and upper-half-plane angles; requires, in log space,

        log|F(z) - eta0| <= log c4 + log|z - x0|,
        log g(z)        <= log c4 + log|z - x0|.

    The reported margin is the smaller of the two worst margins.
    """
    x0 = geom.x0
    n_radii = max(1, sample_count // angles)
    radii = np.geomspace(1e-6, 2.0 * ledger.c * (1.0 - 1e-9), n_radii)
    thetas = (np.arange(angles) + 0.5) * math.pi / angles
    map_margin = math.inf
    green_margin = math.inf
    failures = []
    for r in radii:
        for th in thetas:
            z = complex(x0 + r * math.cos(th), r * math.sin(th))
            w = F_at(eq, geom, z)
            growth = abs(w - geom.eta0)
            if growth > 0:
                margin = ledger.log_c4 + math.log(r) - math.log(growth)
                map_margin = min(map_margin, margin)
                if margin <= 0:
                    failures.append(("map", z, growth))
            g = green_at(eq, z)
            if g > 0:
                margin = ledger.log_c4 + math.log(r) - math.log(g)
                green_margin = min(green_margin, margin)
                if margin <= 0:
                    failures.append(("green", z, g))
    margin = min(map_margin, green_margin)
    return CheckResult(
        name="base_growth",
        passed=not failures,
        margin=margin,
        detail={
            "samples": int(n_radii * angles),
            "log_margin_map": map_margin,
            "log_margin_green": green_margin,
            "failures": failures,
        },
    )


def lipschitz_sup(
    eq: EquilibriumData,
    x0: float,
    y_min: float = 1e-8,
    y_max: float | None = None,
    per_decade: int = 16,
    quad_points: int | None = None,
) -> float:
    """Sampled lower estimate of sup over the complement of g(z)/|z - x0|.

    Samples the vertical ray above x0 on a geometric ladder anchored at
    y_max (so lowering y_min only adds samples and the estimate grows
    monotonically), plus the matching 45-degree ray and all gap midpoints.
    The true supremum dominates every estimate returned here.
    """
    if not 0.0 < y_min < (y_max if y_max is not None else math.inf):
        raise ValueError("need 0 < y_min < y_max")
    E = eq.set
    if y_max is None:
        y_max = 5.0 * E.diameter
    ratio = 10.0 ** (-1.0 / per_decade)
    ys = []
    y = y_max
    while y > y_min * (1.0 + 1e-12):
        ys.append(y)
        y *= ratio
    ys.append(y_min)

    best = 0.0
    half = math.sqrt(0.5)
    for y in ys:
        g = green_at(eq, complex(x0, y), quad_points)
        best = max(best, g / y)
        zd = complex(x0 + half * y, half * y)
        best = max(best, green_at(eq, zd, quad_points) / y)
    for gl, gr in E.gaps:
        mid = 0.5 * (gl + gr)
        if mid != x0:
            best = max(best, green_at(eq, complex(mid, 0.0), quad_points) / abs(mid - x0))
    return best


def farfield_check(
    eq: EquilibriumData,
    ledger: ConstantsLedger,
    x0: float,
    radii=None,
    angles: int = 16,
) -> CheckResult:
    """g(z) <= log(2c |z - x0|) on circles of radius at least 2c."""
    c = ledger.c
    if radii is None:
        radii = (2.0 * c, 10.0 * c, 100.0 * c)
    radii = [float(r) for r in radii]
    if any(r < 2.0 * c - 1e-12 for r in radii):
        raise ValueError("far-field radii must be at least 2c")
    worst = math.inf
    for r in radii:
        bound = math.log(2.0 * c * r)
        for k in range(angles):
            z = x0 + r * cmath.exp(2j * math.pi * (k + 0.5) / angles)
            worst = min(worst, bound - green_at(eq, z))
    return CheckResult(
        name="farfield",
        passed=worst > 0,
        margin=worst,
        detail={"radii": radii, "angles": angles},
    )


@dataclass(frozen=True)
class ExhaustionGreenReport:
    """Green values along an exhaustion at fixed samples, with differences."""

    points: tuple[complex, ...]
    values: tuple[tuple[float, ...], ...]       # per point, per level
    differences: tuple[tuple[float, ...], ...]  # successive increments


def exhaustion_green_check(
    exh: ExhaustionSequence, z_samples, quad_points: int = 256
) -> ExhaustionGreenReport:
    """Green's functions must grow monotonically along a shrinking chain.

    Each level's complement contains the previous one, so for every sample
    the value sequence is nondecreasing; a drop beyond 1e-9 raises (the
    comparison principle admits no exceptions).
    """
    if len(exh.levels) < 2:
        raise ValueError("need at least two levels")
    solved = [solve_equilibrium(level, quad_points) for level in exh.levels]
    points = tuple(complex(z) for z in z_samples)
    values = []
    diffs = []
    for z in points:
        vals = tuple(green_at(eq, z) for eq in solved)
        for j, (g0, g1) in enumerate(zip(vals, vals[1:])):
            if g1 < g0 - 1e-9:
                raise VerificationError(
                    f"Green value dropped along the exhaustion at {z} "
                    f"(level {j} -> {j + 1}: {g0!r} -> {g1!r})"
                )
        values.append(vals)
        diffs.append(tuple(g1 - g0 for g0, g1 in zip(vals, vals[1:])))
    return ExhaustionGreenReport(
        points=points, values=tuple(values), differences=tuple(diffs)
    )


@dataclass(frozen=True)
class DichotomyLevelRow:
    level: int
    band_count: int
    rate_samples: tuple[tuple[int, float], ...]  # (n, n^alpha * E_n)
    sup_estimates: tuple[tuple[float, float], ...]  # (y_min, sup estimate)


@dataclass(frozen=True)
class DichotomyReport:
    """Paired rate ladders and Lipschitz estimates along an exhaustion.

    The report exhibits trends only; it never declares which side of the
    dichotomy a limit set falls on.
    """

    x0: float
    alpha: float
    rows: tuple[DichotomyLevelRow, ...]


def dichotomy_report(
    exh: ExhaustionSequence,
    x0: float,
    alpha: float,
    degrees,
    y_floors,
    quad_points: int = 256,
    grid_points_per_band: int | None = None,
) -> DichotomyReport:
    """Rate ladder and Lipschitz-sup ladder for every exhaustion level."""
    for j, level in enumerate(exh.levels):
        if not level.interior_contains(x0):
            raise ValueError(f"x0 = {x0} is not interior to level {j}")
    y_floors = sorted((float(y) for y in y_floors), reverse=True)
    rows = []
    for j, level in enumerate(exh.levels):
        errors = en_sequence(
            level, x0, alpha, degrees, grid_points_per_band=grid_points_per_band
        )
        rates = tuple((n, n**alpha * e) for n, e in errors)
        eq = solve_equilibrium(level, quad_points)
        sups = tuple(
            (y, lipschitz_sup(eq, x0, y_min=y, quad_points=quad_points))
            for y in y_floors
        )
        rows.append(
            DichotomyLevelRow(
                level=j,
                band_count=level.band_count,
                rate_samples=rates,
                sup_estimates=sups,
            )
        )
    return DichotomyReport(x0=x0, alpha=alpha, rows=tuple(rows))


def random_interval_sets(
    count: int,
    seed: int = 0,
    band_counts=(2, 3, 4),
    min_piece: float = 0.05,
) -> list[tuple[IntervalSet, float]]:
    """Random band structures on [-1, 1] with -1 and 1 as endpoints.

    Bands and gaps all have length at least min_piece; the base point is
    the midpoint of a random band.  Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        m = int(rng.choice(band_counts))
        pieces = 2 * m - 1
        raw = rng.random(pieces)
        lengths = min_piece + raw / raw.sum() * (2.0 - min_piece * pieces)
        edges = -1.0 + np.concatenate([[0.0], np.cumsum(lengths)])
        edges[-1] = 1.0
        bands = tuple((edges[2 * j], edges[2 * j + 1]) for j in range(m))
        E = IntervalSet(bands)
        a, b = E.bands[int(rng.integers(m))]
        out.append((E, 0.5 * (a + b)))
    return out


@dataclass(frozen=True)
class SetReport:
    """All verified bounds for one (set, base point) pair."""

    set: IntervalSet
    x0: float
    ledger: ConstantsLedger
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)


def verify_set(
    E: IntervalSet,
    x0: float,
    sample_count: int = 60,
    quad_points: int = 256,
) -> SetReport:
    """Run the whole bound suite for one set; raises on sandwich violation."""
    eq = solve_equilibrium(E, quad_points)
    geom = comb_geometry(eq, x0)
    ledger = build_constants(eq, geom, x0)
    checks = (
        tooth_height_check(geom, ledger),
        tooth_aspect_check(geom, ledger),
        base_growth_check(eq, geom, ledger, sample_count=sample_count),
        farfield_check(eq, ledger, x0),
    )
    return SetReport(set=E, x0=x0, ledger=ledger, checks=checks)

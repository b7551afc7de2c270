"""Equilibrium measures, logarithmic capacity, and Green's functions.

For E = [a_1,b_1] u ... u [a_m,b_m] the equilibrium (minimal logarithmic
energy, unit mass) measure is absolutely continuous with density

    w(t) = |q(t)| / (pi * sqrt(|R(t)|)),    R(t) = prod_j (t-a_j)(t-b_j),

where q is the monic degree m-1 polynomial fixed by the m-1 conditions

    integral over gap (b_j, a_{j+1}) of q(t)/sqrt(|R(t)|) dt = 0.

These "gap period" conditions make the complexified field q/sqrt(R)
single-valued off E and force exactly one simple zero of q inside each
gap.  For m = 1 the density is the classical arcsine law, q == 1.

The Green's function of the complement with pole at infinity is recovered
from the potential of the density,

    g(z) = integral log|z-t| w(t) dt - log cap(E),

and the capacity itself comes from the cap-free asymptotic identity

    -log cap(E) = lim_{T->inf} [ integral_{b_m}^{T} q/sqrt(R) dt - log T ],

which we evaluate exactly as a convergent tail integral.  A dual-route
cross-check compares the potential-based Green values against direct
real-axis integrals of q/sqrt(R) at two far points.

Numerical scheme: every band or gap integral uses the cosine substitution
of :mod:`potapprox.quadrature` so that Gauss-Legendre sees a smooth
integrand.  Evaluation points too close to a band for fixed-order rules
fall back to adaptive quadrature with a singular-point hint, and Green
values immediately above a band interior use a difference kernel that
avoids the cancellation between potential and capacity terms.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import NumericsError
from .intervals import IntervalSet
from .quadrature import cosine_substitution_nodes, gauss_legendre

__all__ = [
    "EquilibriumData",
    "solve_equilibrium",
    "density_at",
    "mass_of",
    "capacity_of",
    "green_at",
]

DEFAULT_QUAD_POINTS = 256

# closer than this to a band endpoint, green_at refuses to evaluate
ENDPOINT_EXCLUSION = 1e-13


@dataclass(frozen=True)
class EquilibriumData:
    """Solved equilibrium problem for one interval union.

    q_coeffs are the monic monomial coefficients of the gap polynomial in
    ascending order (reporting form); evaluation uses the shifted and
    scaled representation stored alongside, which stays well conditioned
    for many bands.  Immutable; all evaluators are pure functions.
    """

    set: IntervalSet
    q_coeffs: tuple[float, ...]
    capacity: float
    gap_zeros: tuple[float, ...]
    quad_points: int
    scaled_coeffs: tuple[float, ...]  # q(t) = halfspan^(m-1) * sum c_k tau^k
    center: float
    halfspan: float

    def q_at(self, t):
        """Gap polynomial q evaluated via the scaled representation."""
        tau = (np.asarray(t) - self.center) / self.halfspan
        val = np.polynomial.polynomial.polyval(tau, np.asarray(self.scaled_coeffs))
        return val * self.halfspan ** (len(self.scaled_coeffs) - 1)


def _rest_product(E: IntervalSet, exclude: tuple[float, float], t: np.ndarray):
    """prod over band endpoints c not in `exclude` of |t - c|.

    This is |R(t)| with the two endpoints of the active segment factored
    out; the cosine substitution supplies the removed square root.
    """
    t = np.asarray(t)
    out = np.ones_like(t, dtype=float)
    for a, b in E.bands:
        if (a, b) == exclude:
            continue
        out *= np.abs(t - a) * np.abs(t - b)
    return out


def _rest_product_gap(E: IntervalSet, gap: tuple[float, float], t: np.ndarray):
    """Same as _rest_product but excluding the two endpoints of a gap."""
    gl, gr = gap
    t = np.asarray(t)
    out = np.ones_like(t, dtype=float)
    ends = E.endpoints()
    for c in ends:
        if c == gl or c == gr:
            continue
        out *= np.abs(t - c)
    return out


def _sqrt_R_right(E: IntervalSet, t):
    """sqrt(R(t)) for real t to the right of the set (all factors > 0)."""
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    for a, b in E.bands:
        out *= (t - a) * (t - b)
    return np.sqrt(out)


def _sqrt_rest_right(E: IntervalSet, t):
    """sqrt of R(t)/(t - b_m) for t > b_m, the regular part at the edge."""
    t = np.asarray(t, dtype=float)
    bm = E.carrier[1]
    out = np.ones_like(t)
    for a, b in E.bands:
        out *= t - a
        if b != bm:
            out *= t - b
    return np.sqrt(out)


def _solve_gap_polynomial(E: IntervalSet, quad_points: int):
    """Return ascending coefficients of q in the tau = (t-c)/s basis.

    The linear system expresses the vanishing gap periods; it is assembled
    at `quad_points` cosine-substituted Gauss nodes, solved, and verified
    at twice the node count (re-solving once on the fine rule if the
    residual asks for it).
    """
    m = E.band_count
    lo, hi = E.carrier
    center, halfspan = 0.5 * (lo + hi), 0.5 * (hi - lo)
    if m == 1:
        return np.array([1.0]), center, halfspan

    def assemble(n):
        A = np.empty((m - 1, m - 1))
        rhs = np.empty(m - 1)
        scale = np.empty(m - 1)  # absolute integral of the monic term
        for i, (gl, gr) in enumerate(E.gaps):
            t, w = cosine_substitution_nodes(gl, gr, n)
            base = w / np.sqrt(_rest_product_gap(E, (gl, gr), t))
            tau = (t - center) / halfspan
            powers = np.vander(tau, m, increasing=True)
            A[i, :] = base @ powers[:, : m - 1]
            rhs[i] = -(base @ powers[:, m - 1])
            scale[i] = base @ np.abs(powers[:, m - 1])
        return A, rhs, scale

    def worst_residual(A, rhs, scale, coeffs):
        res = A @ coeffs - rhs
        return np.max(np.abs(res) / scale)

    A, rhs, _ = assemble(quad_points)
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1e13:
        raise NumericsError(
            f"gap-period system is ill-conditioned (cond ~ {cond:.3e})"
        )
    coeffs = np.linalg.solve(A, rhs)

    A2, rhs2, scale2 = assemble(2 * quad_points)
    if worst_residual(A2, rhs2, scale2, coeffs) > 1e-11:
        coeffs = np.linalg.solve(A2, rhs2)
        A4, rhs4, scale4 = assemble(4 * quad_points)
        if worst_residual(A4, rhs4, scale4, coeffs) > 1e-10:
            raise NumericsError("gap-period quadrature did not converge")

    return np.append(coeffs, 1.0), center, halfspan


def _capacity_from_tail(E: IntervalSet, q_at, quad_points: int) -> float:
    """Capacity via the cap-free far-field limit of the field q/sqrt(R).

    With x_c the carrier center,

        -log cap = integral_{b_m}^{inf} [q/sqrt(R) - 1/(t-x_c)] dt
                   - log(b_m - x_c),

    split at T0 = b_m + 2*diam: the near part is regularized by
    t = b_m + (T0-b_m)*u^2, the far part by t = x_c + (T0-x_c)/v.
    """
    lo, hi = E.carrier
    xc = 0.5 * (lo + hi)
    diam = hi - lo
    bm = hi
    T0 = bm + 2.0 * diam

    def difference(t):
        return q_at(t) / _sqrt_R_right(E, t) - 1.0 / (t - xc)

    # near piece, u in (0, 1): with t = bm + span*u^2 the singular root is
    # exactly u*sqrt(span), so it is cancelled symbolically against the
    # Jacobian 2*span*u rather than recomputed from t (which would lose
    # half the digits next to the endpoint)
    u, wu = gauss_legendre(quad_points, 0.0, 1.0)
    span = T0 - bm
    t_near = bm + span * u * u
    field_part = q_at(t_near) / _sqrt_rest_right(E, t_near) * 2.0 * math.sqrt(span)
    I1 = np.sum((field_part - 2.0 * span * u / (t_near - xc)) * wu)

    # far piece, v in (0, 1): t = xc + w0/v, dt = -w0/v^2 dv
    w0 = T0 - xc
    v, wv = gauss_legendre(quad_points, 0.0, 1.0)
    t_far = xc + w0 / v
    I2 = np.sum(difference(t_far) * (w0 / (v * v)) * wv)

    log_cap = math.log(bm - xc) - (I1 + I2)
    return math.exp(log_cap)


def _green_right_axis(E: IntervalSet, q_at, T: float, quad_points: int) -> float:
    """Green's function at real T > b_m by direct integration of q/sqrt(R).

    Capacity-free route used for cross-checks: g(T) = int_{b_m}^{T} q/sqrt(R).
    """
    lo, hi = E.carrier
    xc = 0.5 * (lo + hi)
    diam = hi - lo
    bm = hi
    T0 = min(T, bm + 2.0 * diam)

    def field(t):
        return q_at(t) / _sqrt_R_right(E, t)

    # same symbolic endpoint-root cancellation as in the capacity tail
    u, wu = gauss_legendre(quad_points, 0.0, 1.0)
    span = T0 - bm
    t_near = bm + span * u * u
    total = float(
        np.sum(q_at(t_near) / _sqrt_rest_right(E, t_near) * 2.0 * math.sqrt(span) * wu)
    )
    if T > T0:
        # log stretch: s = log(t - xc), integrand stays O(1)
        s, ws = gauss_legendre(quad_points, math.log(T0 - xc), math.log(T - xc))
        t_far = xc + np.exp(s)
        total += float(np.sum(field(t_far) * (t_far - xc) * ws))
    return total


def solve_equilibrium(
    E: IntervalSet, quad_points: int = DEFAULT_QUAD_POINTS
) -> EquilibriumData:
    """Solve for the gap polynomial, capacity, and gap zeros of a set.

    Raises NumericsError when the gap system is ill-conditioned or when a
    post-solve residual (gap periods, unit mass) exceeds its tolerance.
    """
    if quad_points < 32:
        raise ValueError("quad_points must be at least 32")
    m = E.band_count

    scaled, center, halfspan = _solve_gap_polynomial(E, quad_points)

    def q_at(t):
        tau = (np.asarray(t) - center) / halfspan
        return np.polynomial.polynomial.polyval(tau, scaled) * halfspan ** (m - 1)

    # one zero of q per gap, located by bracketing
    zeros = []
    from scipy.optimize import brentq

    for gl, gr in E.gaps:
        qa, qb = float(q_at(gl)), float(q_at(gr))
        if qa == 0.0:
            zeros.append(gl)
            continue
        if qb == 0.0:
            zeros.append(gr)
            continue
        if qa * qb > 0:
            raise NumericsError(
                f"gap polynomial does not change sign across gap ({gl}, {gr})"
            )
        zeros.append(float(brentq(lambda t: float(q_at(t)), gl, gr, xtol=1e-15)))

    # unit total mass is implied by monicity plus the gap conditions;
    # verify it as a quadrature health check
    total = 0.0
    for a, b in E.bands:
        t, w = cosine_substitution_nodes(a, b, quad_points)
        total += float(
            np.sum(w * np.abs(q_at(t)) / np.sqrt(_rest_product(E, (a, b), t)))
        ) / math.pi
    if abs(total - 1.0) > 1e-10:
        raise NumericsError(
            f"equilibrium mass quadrature off by {total - 1.0:.3e}"
        )

    capacity = _capacity_from_tail(E, q_at, quad_points)

    # reporting form of q: plain monomial coefficients, forced monic
    poly = np.polynomial.Polynomial(
        scaled, domain=[center - halfspan, center + halfspan], window=[-1.0, 1.0]
    )
    mono = poly.convert(domain=[-1.0, 1.0], window=[-1.0, 1.0]).coef * halfspan ** (
        m - 1
    )
    mono = np.atleast_1d(mono)
    if len(mono) < m:
        mono = np.pad(mono, (0, m - len(mono)))
    mono[-1] = 1.0

    return EquilibriumData(
        set=E,
        q_coeffs=tuple(float(c) for c in mono),
        capacity=float(capacity),
        gap_zeros=tuple(zeros),
        quad_points=quad_points,
        scaled_coeffs=tuple(float(c) for c in scaled),
        center=center,
        halfspan=halfspan,
    )


def density_at(eq: EquilibriumData, x: float) -> float:
    """Equilibrium density |q(x)| / (pi sqrt(|R(x)|)) at an interior point."""
    E = eq.set
    j = E.interior_band_index(x)
    if j is None:
        raise ValueError(f"{x} is not interior to the set; density undefined")
    a, b = E.bands[j]
    local = math.sqrt((x - a) * (b - x))
    rest = math.sqrt(float(_rest_product(E, (a, b), np.array([x]))[0]))
    return abs(float(eq.q_at(x))) / (math.pi * local * rest)


def mass_of(eq: EquilibriumData, a: float, b: float) -> float:
    """Equilibrium mass of [a, b] (intersected with the set)."""
    if a > b:
        raise ValueError("need a <= b")
    E = eq.set
    total = 0.0
    for ba, bb in E.bands:
        lo, hi = max(a, ba), min(b, bb)
        if lo >= hi:
            continue
        t, w = cosine_substitution_nodes(ba, bb, eq.quad_points, lo=lo, hi=hi)
        total += float(
            np.sum(w * np.abs(eq.q_at(t)) / np.sqrt(_rest_product(E, (ba, bb), t)))
        ) / math.pi
    return total


def capacity_of(eq: EquilibriumData) -> float:
    """Capacity with a dual-route cross-check at two far points.

    The stored value comes from the tail-integral formula.  Here we verify
    it by comparing the potential-based Green value against the direct
    real-axis integral of q/sqrt(R) at T = b_m + 10^k diam, k = 3, 4; the
    two evaluators share no code path and both determine log cap exactly.
    """
    E = eq.set
    diam = E.diameter
    bm = E.carrier[1]
    for k in (3, 4):
        T = bm + 10.0**k * diam
        direct = _green_right_axis(E, eq.q_at, T, eq.quad_points)
        potential = _potential_at(eq, complex(T, 0.0)) - math.log(eq.capacity)
        if abs(direct - potential) > 1e-9:
            raise NumericsError(
                "capacity cross-check failed at "
                f"T=b_m+1e{k}*diam: direct={direct!r} potential={potential!r}"
            )
    return eq.capacity


def _band_potential_fixed(eq, j, z, n):
    """integral over band j of log|z-t| w(t) dt by the fixed cosine rule."""
    E = eq.set
    a, b = E.bands[j]
    t, w = cosine_substitution_nodes(a, b, n)
    f = np.log(np.abs(z - t)) * np.abs(eq.q_at(t)) / np.sqrt(
        _rest_product(E, (a, b), t)
    )
    return float(np.sum(w * f)) / math.pi


def _quad_on_band(eq, j, smooth, near_x=None, scale=None, epsabs=1e-13, epsrel=1e-11):
    """Adaptive integral of smooth(t)/(pi sqrt(|R|)) over band j in theta form.

    `smooth` receives scalar t; the inverse square roots at the band
    endpoints are absorbed by the substitution.  When the integrand has a
    feature of width `scale` around `near_x` (an evaluation point hovering
    next to the band), a geometric cascade of breakpoints is planted
    there: adaptive rules only see features that some initial panel
    resolves, and the cascade guarantees panels at every magnitude from
    the feature width up to the band length.
    """
    E = eq.set
    a, b = E.bands[j]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)

    def f(theta):
        t = mid + half * math.cos(theta)
        rest = float(_rest_product(E, (a, b), np.array([t]))[0])
        return smooth(t) * abs(float(eq.q_at(t))) / math.sqrt(rest) / math.pi

    points = None
    if near_x is not None and scale is not None and scale > 0.0:
        ts = [near_x] if a < near_x < b else []
        w = scale
        while w < 2.0 * (b - a):
            for t in (near_x - w, near_x + w):
                if a < t < b:
                    ts.append(t)
            w *= 5.0
        points = sorted(
            float(np.arccos(np.clip((t - mid) / half, -1.0, 1.0))) for t in ts
        )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(
            f, 0.0, math.pi, points=points, epsabs=epsabs, epsrel=epsrel, limit=400
        )
    if err > 5e-9:
        raise NumericsError(
            f"adaptive band quadrature did not converge (error ~ {err:.2e})"
        )
    return val


def _potential_at(eq, z: complex, quad_points: int | None = None) -> float:
    """Logarithmic potential integral log|z-t| against the density.

    Bands that z approaches within 5% of their length switch from the
    fixed rule to adaptive quadrature with a split at the projection.
    """
    E = eq.set
    n = quad_points or eq.quad_points
    total = 0.0
    for j, (a, b) in enumerate(E.bands):
        dx = max(a - z.real, 0.0, z.real - b)
        dist = math.hypot(dx, z.imag)
        if dist >= 0.05 * (b - a):
            total += _band_potential_fixed(eq, j, z, n)
        else:
            x_proj = min(max(z.real, a), b)
            total += _quad_on_band(
                eq,
                j,
                lambda t: math.log(abs(z - t)),
                near_x=x_proj,
                scale=max(dist, 1e-16 * (b - a)),
            )
    return total


def _green_near_interior(eq, x: float, y: float) -> float:
    """Green value just above a band interior via the difference kernel.

    For x in the interior of E the boundary value g(x) = 0 turns the
    potential formula into

        g(x + iy) = integral 0.5*log(1 + y^2/(x-t)^2) w(t) dt,

    a positive, capacity-free integrand that is immune to the cancellation
    which plagues the direct formula when y is tiny.
    """
    E = eq.set
    total = 0.0
    for j, (a, b) in enumerate(E.bands):
        x_proj = min(max(x, a), b)
        dist = math.hypot(x - x_proj, y)

        def f(t):
            return 0.5 * math.log1p(y * y / (x - t) ** 2)

        total += _quad_on_band(
            eq,
            j,
            f,
            near_x=x_proj,
            scale=dist,
            epsabs=1e-15,
            epsrel=1e-9,
        )
    return total


def green_at(eq: EquilibriumData, z, quad_points: int | None = None) -> float:
    """Green's function of the complement with pole at infinity.

    Returns exactly 0.0 for real arguments inside the set.  Defined on the
    whole plane; symmetric under conjugation.
    """
    z = complex(z)
    E = eq.set
    if z.imag == 0.0 and E.contains(z.real):
        return 0.0
    ends = E.endpoints()
    if float(np.min(np.abs(z - ends))) < ENDPOINT_EXCLUSION:
        raise NumericsError(
            f"{z} is within {ENDPOINT_EXCLUSION} of a band endpoint"
        )
    x, y = z.real, abs(z.imag)
    if y > 0.0:
        j = E.interior_band_index(x)
        if j is not None:
            a, b = E.bands[j]
            if min(x - a, b - x) > 4.0 * y and y <= 0.01 * E.diameter:
                return _green_near_interior(eq, x, y)
    return _potential_at(eq, complex(x, y), quad_points) - math.log(eq.capacity)

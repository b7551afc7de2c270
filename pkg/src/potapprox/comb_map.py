"""The comb strip map of the upper half-plane.

The complement of an m-band set E in the upper half-plane maps conformally
onto a half-strip with vertical slits,

    G = {0 < Re w < pi, Im w > 0} minus the teeth [u_j, u_j + i v_j],

with the bands going to the base segments [u_{j-1}, u_j] of the real axis
and the gaps folding onto the teeth.  The map F is pinned down by three
facts used throughout this module:

  * Im F(z) equals the Green's function g of the complement,
  * pi times the equilibrium mass of [a, x] equals the length of the image
    F([a, x] cap E), hence u_j and the base image eta0 = F(x0) are just
    cumulative masses,
  * F'(x0) = pi * w(x0) at interior points, the local stretching factor.

The derivative of F extends analytically as i*q(z)/sqrt(R(z)) with the
branch of sqrt(R) that is continuous on the closed upper half-plane and
positive real far to the right.  Taking principal square roots factor by
factor realizes exactly that branch, so F is evaluated by integrating the
derivative along a polyline that stays in the closed half-plane.

Geometry (u, v, eta0) is cheaper and better conditioned through masses and
Green values, so :func:`comb_geometry` never integrates paths; the path
integral lives in :func:`F_at` for complex arguments and as an independent
cross-check of the identities (:func:`check_comb_identities`).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from .equilibrium import EquilibriumData, density_at, green_at, mass_of
from .errors import NumericsError
from .intervals import IntervalSet

__all__ = [
    "CombGeometry",
    "comb_geometry",
    "h_at",
    "F_at",
    "check_comb_identities",
    "CombIdentityReport",
]

# vertical offset of the integration polyline, relative to the diameter
PATH_LIFT = 1e-6

# a path point may not come closer than this to a band endpoint
PATH_EXCLUSION = 1e-12


@dataclass(frozen=True)
class CombGeometry:
    """Comb data: teeth abscissae u, heights v, and the base image eta0.

    u has m+1 entries with u[0] = 0 and u[m] = pi (total mass one); v has
    m-1 positive entries, one per gap.  eta0 lies in the open base segment
    corresponding to the band containing x0.
    """

    u: tuple[float, ...]
    v: tuple[float, ...]
    eta0: float
    x0: float

    def __post_init__(self) -> None:
        u = self.u
        if any(not ua < ub for ua, ub in zip(u, u[1:])):
            raise ValueError("comb abscissae u must be strictly increasing")
        if abs(u[0]) > 1e-12 or abs(u[-1] - math.pi) > 1e-9:
            raise ValueError("comb abscissae must run from 0 to pi")
        if any(vj <= 0 for vj in self.v):
            raise ValueError("tooth heights must be positive")
        if len(self.v) != len(u) - 2:
            raise ValueError("need one tooth per gap")


def comb_geometry(eq: EquilibriumData, x0: float) -> CombGeometry:
    """Comb geometry from cumulative masses and Green values.

    u_j is pi times the mass of the first j bands; the height of tooth j
    is the Green value at the zero of the gap polynomial inside gap j,
    which is the maximum of g along that gap; eta0 is pi times the mass to
    the left of x0.
    """
    E = eq.set
    k = E.interior_band_index(x0)
    if k is None:
        raise ValueError(f"base point {x0} must be interior to the set")

    masses = [mass_of(eq, a, b) for a, b in E.bands]
    u = [0.0]
    acc = 0.0
    for mass in masses:
        acc += mass
        u.append(math.pi * acc)
    if abs(u[-1] - math.pi) > 1e-9:
        raise NumericsError(f"total mass quadrature drift: u_m = {u[-1]!r}")

    v = [green_at(eq, zero) for zero in eq.gap_zeros]

    eta0 = math.pi * (sum(masses[:k]) + mass_of(eq, E.bands[k][0], x0))
    if not u[k] < eta0 < u[k + 1]:
        raise NumericsError(
            f"base image eta0={eta0!r} fell outside its base segment"
        )
    return CombGeometry(u=tuple(u), v=tuple(v), eta0=eta0, x0=x0)


def h_at(eq: EquilibriumData, x0: float) -> float:
    """Local stretching factor of the map: F'(x0) = pi * density(x0)."""
    return math.pi * density_at(eq, x0)


def _sqrt_R_upper(E: IntervalSet, t: np.ndarray) -> np.ndarray:
    """Branch of sqrt(R) continuous on the closed upper half-plane.

    Each factor sqrt(t - c) uses the principal branch; for Im t >= 0 every
    factor argument stays in the closed upper half-plane, off the cut, so
    the product is the half-plane-consistent branch, positive real for
    real t to the right of the set.
    """
    t = np.asarray(t, dtype=complex)
    ends = E.endpoints()
    return np.prod(np.sqrt(t[..., None] - ends), axis=-1)


def _field(eq: EquilibriumData, t: np.ndarray) -> np.ndarray:
    """F'(t) = i q(t)/sqrt(R(t)) on the closed upper half-plane."""
    return 1j * eq.q_at(t) / _sqrt_R_upper(eq.set, t)


def _clamp_upper(t: complex) -> complex:
    # round-off below the axis would flip the principal branch
    return complex(t.real, max(t.imag, 0.0))


def _assert_branch_continuity(E: IntervalSet, p: complex, q: complex) -> None:
    """Check sqrt(R) varies continuously along the segment [p, q].

    Adjacent samples whose arguments differ by >= pi/2 are bisected until
    they agree or the subinterval collapses; a jump that survives the
    collapse is a branch inconsistency.
    """

    def arg_at(s: float) -> float:
        t = _clamp_upper(p + s * (q - p))
        return cmath.phase(complex(_sqrt_R_upper(E, np.array([t]))[0]))

    def gap(a: float) -> float:
        d = abs(a) % (2 * math.pi)
        return min(d, 2 * math.pi - d)

    stack = [(k / 32.0, (k + 1) / 32.0, arg_at(k / 32.0), arg_at((k + 1) / 32.0))
             for k in range(32)]
    while stack:
        s0, s1, a0, a1 = stack.pop()
        if gap(a1 - a0) < 0.5 * math.pi:
            continue
        if s1 - s0 < 1e-13:
            raise NumericsError(
                "branch of sqrt(R) is inconsistent along the integration path"
            )
        sm = 0.5 * (s0 + s1)
        am = arg_at(sm)
        stack.append((s0, sm, a0, am))
        stack.append((sm, s1, am, a1))


def _integrate_segment(
    eq: EquilibriumData, p: complex, q: complex, rel_tol: float
) -> complex:
    if p == q:
        return 0.0 + 0.0j
    _assert_branch_continuity(eq.set, p, q)
    dz = q - p

    def f(s):
        t = _clamp_upper(p + s * dz)
        return _field(eq, np.array([t]))[0] * dz

    val, err = quad_vec(f, 0.0, 1.0, epsabs=1e-13, epsrel=rel_tol, limit=400)
    if err > 1e-7:
        raise NumericsError(
            f"path quadrature did not converge (error ~ {err:.2e})"
        )
    return complex(val)


def F_at(
    eq: EquilibriumData, geom: CombGeometry, z, rel_tol: float = 1e-10
) -> complex:
    """Evaluate the comb map at a point of the closed upper half-plane.

    Integrates F' along the polyline x0 -> x0 + i*delta -> z + i*delta -> z
    with delta a small multiple of the diameter, so the path clears the
    branch cuts along the bands except for the final vertical descent.
    """
    z = complex(z)
    E = eq.set
    if z.imag < 0:
        raise ValueError("argument must lie in the closed upper half-plane")
    ends = E.endpoints()
    if np.any(z == ends.astype(complex)):
        raise ValueError("the map is singular at band endpoints")
    x0 = geom.x0
    if z == complex(x0, 0.0):
        return complex(geom.eta0, 0.0)
    if z.imag < PATH_LIFT and float(np.min(np.abs(z - ends))) < PATH_EXCLUSION:
        raise NumericsError(
            f"integration path passes within {PATH_EXCLUSION} of an endpoint"
        )

    delta = PATH_LIFT * E.diameter
    waypoints = [
        complex(x0, 0.0),
        complex(x0, delta),
        complex(z.real, z.imag + delta),
        z,
    ]
    total = 0.0 + 0.0j
    for p, q in zip(waypoints, waypoints[1:]):
        total += _integrate_segment(eq, p, q, rel_tol)
    value = geom.eta0 + total
    if value.imag < -1e-8:
        raise NumericsError(
            f"comb map image has negative height: Im F = {value.imag!r}"
        )
    return value


@dataclass(frozen=True)
class CombIdentityReport:
    """Worst-case deviations between the map and its potential-theoretic kin.

    All entries are signed magnitudes; callers decide on thresholds.
    """

    im_off_set_max: float      # |Im F - g| over upper half-plane samples
    im_on_set_max: float       # |Im F| along the bands
    band_edge_max: float       # path-integral route vs cumulative-mass route
    derivative_rel_err: float  # central difference of F vs pi*density
    samples: int


def check_comb_identities(
    eq: EquilibriumData, geom: CombGeometry, sample_count: int = 100
) -> CombIdentityReport:
    """Exercise the identities tying F to Green's function and the masses.

    Off the set, Im F must reproduce green_at; on the set F is real with
    pi*mass as its value; at band edges the path integral must agree with
    the cumulative-mass abscissae (compared slightly inside the band, with
    the leftover mass added, to stay clear of the endpoint singularity);
    and the central difference of F at x0 must match pi*density.
    """
    E = eq.set
    lo, hi = E.carrier
    diam = E.diameter
    rng = np.random.default_rng(0)

    im_off = 0.0
    for _ in range(sample_count):
        x = rng.uniform(lo - 0.25 * diam, hi + 0.25 * diam)
        y = diam * 10.0 ** rng.uniform(-3.0, 0.5)
        z = complex(x, y)
        im_off = max(im_off, abs(F_at(eq, geom, z).imag - green_at(eq, z)))

    im_on = 0.0
    for a, b in E.bands:
        for x in np.linspace(a + 0.05 * (b - a), b - 0.05 * (b - a), 8):
            im_on = max(im_on, abs(F_at(eq, geom, complex(x, 0.0)).imag))

    edge = 0.0
    for j, (a, b) in enumerate(E.bands):
        step = 1e-3 * (b - a)
        xr = b - step
        right = F_at(eq, geom, complex(xr, 0.0)).real + math.pi * mass_of(eq, xr, b)
        edge = max(edge, abs(right - geom.u[j + 1]))
        xl = a + step
        left = F_at(eq, geom, complex(xl, 0.0)).real - math.pi * mass_of(eq, a, xl)
        edge = max(edge, abs(left - geom.u[j]))

    k = E.interior_band_index(geom.x0)
    a, b = E.bands[k]
    s = 1e-6 * (b - a)
    fp = (
        F_at(eq, geom, complex(geom.x0 + s, 0.0)).real
        - F_at(eq, geom, complex(geom.x0 - s, 0.0)).real
    ) / (2 * s)
    h = h_at(eq, geom.x0)
    deriv_rel = abs(fp - h) / h

    return CombIdentityReport(
        im_off_set_max=im_off,
        im_on_set_max=im_on,
        band_edge_max=edge,
        derivative_rel_err=deriv_rel,
        samples=sample_count,
    )

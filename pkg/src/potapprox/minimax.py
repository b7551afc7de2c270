"""Best uniform polynomial approximation of |x - x0|^alpha on interval unions.

The error of best approximation by polynomials of degree at most n,

    E_n = inf over p of sup over E of | |x-x0|^alpha - p(x) |,

is computed by a Remez exchange in two phases.  The discrete phase runs
classical multi-point exchange on a dense cosine grid per band until the
grid maximum of the residual matches the levelled error.  The polish phase
then frees the reference from the grid: each alternation point is re-located
by bounded scalar maximization of the signed residual inside its bracketing
interval (clipped to its band), the levelled system is re-solved, and the
cycle repeats until the n+2 residual magnitudes agree to one part in 1e11.
The polish is what takes the reported error from grid resolution (order
grid-spacing squared) to full double precision.

Polynomials are represented in the Chebyshev basis of the carrier interval
[a_1, b_m]; on a union of bands that keeps one global, well-conditioned
representation of the space of candidates.  The levelling step solves the
(n+2) x (n+2) system p(x_i) + (-1)^i * lam = f(x_i) on the current
reference.  Residuals for degrees above 60 are accumulated in extended
precision (numpy longdouble) so that equioscillation certificates stay
meaningful at the 1e-12 level.

The kink of |x - x0|^alpha is handled explicitly: x0 joins the grid, and
the polish always evaluates x0 as an extremum candidate, because for
alpha <= 1 the extremum sits exactly at the cusp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.optimize import minimize_scalar

from .errors import NumericsError
from .intervals import IntervalSet, chebyshev_grid

__all__ = [
    "MinimaxProblem",
    "MinimaxResult",
    "remez",
    "en_sequence",
    "eval_poly",
]

MAX_EXCHANGE_ITERATIONS = 200
MAX_POLISH_ITERATIONS = 40
EXTENDED_PRECISION_DEGREE = 60  # longdouble residuals above this degree
ALTERNATION_RTOL = 1e-6


def _is_even_integer(alpha: float) -> bool:
    return abs(alpha - 2.0 * round(alpha / 2.0)) < 1e-12


@dataclass(frozen=True)
class MinimaxProblem:
    """One approximation instance: the set, the pole x0, alpha, and degree."""

    set: IntervalSet
    x0: float
    alpha: float
    degree: int

    def __post_init__(self) -> None:
        if not self.set.contains(self.x0):
            raise ValueError(f"x0 = {self.x0} must belong to the set")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")


@dataclass(frozen=True)
class MinimaxResult:
    """Converged minimax data.

    coefficients are in the Chebyshev basis of the carrier interval.  The
    bracket fields record the de la Vallee Poussin lower bound (smallest
    alternation magnitude) and the reported error (largest); their gap
    bounds how far the result can sit from the true infimum.
    """

    problem: MinimaxProblem
    error: float
    coefficients: tuple[float, ...]
    alternation_points: tuple[float, ...]
    iterations: int
    bracket_low: float
    bracket_high: float


def _to_unit(x, carrier, dtype=float):
    a, b = carrier
    x = np.asarray(x, dtype=dtype)
    return (2.0 * x - (a + b)) / (b - a)


def eval_poly(coefficients, carrier, x):
    """Evaluate a carrier-basis Chebyshev series at x."""
    return cheb.chebval(_to_unit(x, carrier), np.asarray(coefficients))


def _make_residual(problem, coefficients, extended):
    """Residual f - p as a callable over arrays, optionally in longdouble."""
    carrier = problem.set.carrier
    dtype = np.longdouble if extended else float
    c = np.asarray(coefficients, dtype=dtype)
    x0 = dtype(problem.x0)
    alpha = dtype(problem.alpha)

    def residual(x):
        xs = np.asarray(x, dtype=dtype)
        xi = _to_unit(xs, carrier, dtype=dtype)
        return np.abs(xs - x0) ** alpha - cheb.chebval(xi, c)

    return residual


def _solve_levelled(problem, ref):
    """Solve p(x_i) + (-1)^i lam = f(x_i) on the reference points."""
    n = problem.degree
    V = cheb.chebvander(_to_unit(ref, problem.set.carrier), n)
    signs = np.where(np.arange(len(ref)) % 2 == 0, 1.0, -1.0)
    M = np.hstack([V, signs[:, None]])
    f = np.abs(ref - problem.x0) ** problem.alpha
    try:
        sol = np.linalg.solve(M, f)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(M)
        raise NumericsError(
            f"levelling system is singular (cond ~ {cond:.3e})"
        ) from exc
    coeffs, lam = sol[:-1], sol[-1]
    if not np.all(np.isfinite(sol)):
        raise NumericsError("levelling system produced non-finite values")
    return coeffs, float(lam)


def _alternation_candidates(r, signs_filled, ref_idx):
    """Indices of per-run residual maxima merged with the current reference.

    Consecutive sign runs alternate by construction; merging with the old
    reference (whose residuals alternate exactly) guarantees at least n+2
    alternating candidates survive the same-sign collapse.
    """
    change = np.flatnonzero(signs_filled[1:] != signs_filled[:-1]) + 1
    starts = np.concatenate([[0], change])
    stops = np.concatenate([change, [len(r)]])
    cands = [s + int(np.argmax(np.abs(r[s:e]))) for s, e in zip(starts, stops)]
    merged = sorted(set(cands) | set(ref_idx))
    out: list[int] = []
    for i in merged:
        if out and signs_filled[i] == signs_filled[out[-1]]:
            if abs(r[i]) > abs(r[out[-1]]):
                out[-1] = i
        else:
            out.append(i)
    return out


def _select_window(cands, r, target):
    """Pick `target` consecutive candidates containing the global maximum.

    Among admissible windows the one with the largest minimal magnitude is
    kept, which maximizes exchange progress.
    """
    mags = np.abs(r[cands])
    gpos = int(np.argmax(mags))
    best, best_score = None, -1.0
    for start in range(len(cands) - target + 1):
        if not (start <= gpos < start + target):
            continue
        score = float(np.min(mags[start : start + target]))
        if score > best_score:
            best_score, best = score, start
    return cands[best : best + target]


def _filled_signs(r):
    signs = np.sign(r)
    for i in range(1, len(signs)):  # zeros inherit the previous sign
        if signs[i] == 0.0:
            signs[i] = signs[i - 1]
    if signs[0] == 0.0:
        signs[0] = 1.0
    return signs


def _discrete_phase(problem, grid, tol):
    """Multi-point exchange on the grid until levelled and max errors meet.

    The reference is seeded from the least-squares residual: orthogonality
    to the polynomial space forces at least n+1 sign changes, so the run
    maxima provide a full alternating start even where a hand-picked
    symmetric reference would interpolate the target exactly.  Once the
    levelled solve runs, the reference keeps alternating by construction
    and the candidate set can never fall short again.
    """
    n = problem.degree
    target = n + 2
    extended = n > EXTENDED_PRECISION_DEGREE

    V = cheb.chebvander(_to_unit(grid, problem.set.carrier), n)
    f = np.abs(grid - problem.x0) ** problem.alpha
    c_ls, *_ = np.linalg.lstsq(V, f, rcond=None)
    r_ls = f - V @ c_ls
    cands = _alternation_candidates(r_ls, _filled_signs(r_ls), [])
    if len(cands) < target:
        raise NumericsError("least-squares residual has too few sign runs")
    ref_idx = _select_window(cands, r_ls, target)

    # the polish phase refines the result below any grid resolution, so the
    # exchange may stop once it stalls at the double-precision noise floor
    stop_ratio = max(tol, 1e-9)
    previous_levelled = 0.0
    for iteration in range(1, MAX_EXCHANGE_ITERATIONS + 1):
        coeffs, lam = _solve_levelled(problem, grid[ref_idx])
        r = np.asarray(
            _make_residual(problem, coeffs, extended)(grid), dtype=float
        )
        levelled = abs(lam)
        grid_max = float(np.max(np.abs(r)))
        if levelled == 0.0:
            raise NumericsError("levelled error collapsed to zero")
        if grid_max / levelled - 1.0 < stop_ratio:
            return coeffs, ref_idx, iteration
        if levelled <= previous_levelled * (1.0 + 1e-14):
            return coeffs, ref_idx, iteration  # stalled at rounding level
        previous_levelled = levelled
        cands = _alternation_candidates(r, _filled_signs(r), ref_idx)
        if len(cands) < target:
            raise NumericsError("exchange lost alternation on the grid")
        new_idx = _select_window(cands, r, target)
        if new_idx == ref_idx:
            return coeffs, ref_idx, iteration
        ref_idx = new_idx
    raise NumericsError(
        f"exchange did not converge in {MAX_EXCHANGE_ITERATIONS} iterations"
    )


def _polish_phase(problem, grid, ref, tol):
    """Free the reference from the grid and converge the alternation set."""
    n = problem.degree
    extended = n > EXTENDED_PRECISION_DEGREE
    bands = problem.set.bands
    x0 = problem.x0
    diam = problem.set.diameter
    xatol = 1e-13 * max(1.0, diam)

    coeffs, lam = _solve_levelled(problem, ref)
    iterations = 0
    for _ in range(MAX_POLISH_ITERATIONS):
        iterations += 1
        residual = _make_residual(problem, coeffs, extended)

        def r_scalar(x):
            return float(residual(np.array([x]))[0])

        signs = np.sign([r_scalar(x) for x in ref])
        new_ref = []
        for i, x in enumerate(ref):
            j = problem.set.band_index(x)
            a, b = bands[j]
            lo = a if (i == 0 or ref[i - 1] < a) else 0.5 * (ref[i - 1] + x)
            hi = b if (i == len(ref) - 1 or ref[i + 1] > b) else 0.5 * (x + ref[i + 1])
            s = signs[i] if signs[i] != 0 else 1.0

            candidates = [x, lo, hi]
            if lo < x0 < hi:
                candidates.append(x0)
            if hi > lo:
                opt = minimize_scalar(
                    lambda t: -s * r_scalar(t),
                    bounds=(lo, hi),
                    method="bounded",
                    options={"xatol": xatol},
                )
                if opt.success:
                    candidates.append(float(opt.x))
            new_ref.append(max(candidates, key=lambda t: s * r_scalar(t)))
        ref = np.array(new_ref)
        coeffs, lam = _solve_levelled(problem, ref)
        residual = _make_residual(problem, coeffs, extended)
        mags = np.abs(np.asarray(residual(ref), dtype=float))
        defect = 1.0 - float(np.min(mags)) / float(np.max(mags))
        if defect < 1e-11:
            break

    residual = _make_residual(problem, coeffs, extended)
    r_ref = np.asarray(residual(ref), dtype=float)
    r_grid = np.asarray(residual(grid), dtype=float)
    return coeffs, ref, r_ref, float(np.max(np.abs(r_grid))), iterations


def _even_alpha_shortcircuit(problem, grid):
    """When alpha is an even integer <= degree, f itself is a polynomial."""
    n = problem.degree
    carrier = problem.set.carrier
    k = int(round(problem.alpha))
    base = np.polynomial.Polynomial([-problem.x0, 1.0]) ** k
    series = cheb.Chebyshev(cheb.poly2cheb(base.coef), domain=list(carrier))
    coeffs = np.zeros(n + 1)
    coeffs[: len(series.coef)] = series.coef
    idx = np.unique(np.round(np.linspace(0, len(grid) - 1, n + 2)).astype(int))
    return MinimaxResult(
        problem=problem,
        error=0.0,
        coefficients=tuple(float(c) for c in coeffs),
        alternation_points=tuple(float(x) for x in grid[idx]),
        iterations=0,
        bracket_low=0.0,
        bracket_high=0.0,
    )


def remez(
    problem: MinimaxProblem,
    grid_points_per_band: int | None = None,
    tol: float = 1e-12,
) -> MinimaxResult:
    """Minimax error and polynomial by discrete exchange plus polish.

    grid_points_per_band defaults to max(2000/m, 30*(n+1)/m) and must stay
    at or above 10*(n+1)/m; tol controls the discrete stopping ratio
    (grid max / levelled - 1) and must be at least 1e-13.
    """
    E = problem.set
    n = problem.degree
    m = E.band_count
    if tol < 1e-13:
        raise ValueError("tol below 1e-13 is not resolvable in double precision")
    minimum = math.ceil(10 * (n + 1) / m)
    if grid_points_per_band is None:
        grid_points_per_band = max(math.ceil(2000 / m), math.ceil(30 * (n + 1) / m))
    if grid_points_per_band < minimum:
        raise ValueError(
            f"grid_points_per_band must be at least {minimum} for degree {n}"
        )

    grid = chebyshev_grid(E, grid_points_per_band)
    if E.contains(problem.x0):
        grid = np.unique(np.concatenate([grid, [problem.x0]]))

    if _is_even_integer(problem.alpha) and n >= round(problem.alpha):
        return _even_alpha_shortcircuit(problem, grid)

    total_iterations = 0
    coeffs, ref_idx, its = _discrete_phase(problem, grid, tol)
    total_iterations += its
    ref = grid[ref_idx].astype(float)

    for _ in range(3):  # polish; re-enter exchange if the grid disagrees
        coeffs, ref, r_ref, grid_max, its = _polish_phase(problem, grid, ref, tol)
        total_iterations += its
        ref_max = float(np.max(np.abs(r_ref)))
        if grid_max <= ref_max * (1.0 + 1e-8):
            break
        coeffs, ref_idx, its = _discrete_phase(problem, grid, tol)
        total_iterations += its
        ref = grid[ref_idx].astype(float)
    else:
        raise NumericsError("polish and grid phases failed to agree")

    signs = np.sign(r_ref)
    if np.any(signs == 0) or np.any(signs[1:] == signs[:-1]):
        raise NumericsError("alternation lost during polish")
    error = float(np.max(np.abs(r_ref)))
    low = float(np.min(np.abs(r_ref)))
    if error > 0 and (error - low) / error > ALTERNATION_RTOL:
        raise NumericsError(
            f"equioscillation defect {(error - low) / error:.2e} "
            f"exceeds {ALTERNATION_RTOL}"
        )
    return MinimaxResult(
        problem=problem,
        error=error,
        coefficients=tuple(float(c) for c in coeffs),
        alternation_points=tuple(float(x) for x in ref),
        iterations=total_iterations,
        bracket_low=low,
        bracket_high=error,
    )


def en_sequence(
    E: IntervalSet,
    x0: float,
    alpha: float,
    degrees,
    grid_points_per_band: int | None = None,
    tol: float = 1e-12,
) -> list[tuple[int, float]]:
    """Minimax errors for an increasing list of degrees.

    The errors must be nonincreasing in the degree; a violation beyond
    rounding slack indicates a failed exchange and raises.
    """
    degrees = [int(d) for d in degrees]
    if any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise ValueError("degrees must be strictly increasing")
    out = []
    for n in degrees:
        result = remez(
            MinimaxProblem(set=E, x0=x0, alpha=alpha, degree=n),
            grid_points_per_band=grid_points_per_band,
            tol=tol,
        )
        out.append((n, result.error))
    for (_, ea), (nb, eb) in zip(out, out[1:]):
        if eb > ea + 1e-12 + 1e-12 * ea:
            raise NumericsError(
                f"error increased from degree step to {nb}: {ea!r} -> {eb!r}"
            )
    return out

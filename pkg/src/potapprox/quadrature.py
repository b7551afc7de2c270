"""Gauss-Legendre helpers and the cosine endpoint substitution.

All densities handled in this package carry inverse-square-root factors at
segment endpoints.  The substitution t = mid + half*cos(theta) turns

    integral over [lo, hi] of f(t) / sqrt((t-a)(b-t)) dt

into a plain integral of f(t(theta)) over the matching theta range, which
Gauss-Legendre then resolves with geometric convergence for analytic f.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0):
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = _leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def cosine_substitution_nodes(
    a: float, b: float, n: int, lo: float | None = None, hi: float | None = None
):
    """Nodes t and weights w with sum f(t)*w ~ integral of f/sqrt((t-a)(b-t)).

    The integration range is [lo, hi] clipped to [a, b]; by default the
    whole segment.  Weights already include the square-root factor, so f
    must be the smooth part only.
    """
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    th_hi = 0.0 if hi is None or hi >= b else float(np.arccos(np.clip((hi - mid) / half, -1.0, 1.0)))
    th_lo = np.pi if lo is None or lo <= a else float(np.arccos(np.clip((lo - mid) / half, -1.0, 1.0)))
    # t increasing means theta decreasing; integrate theta over [th_hi, th_lo]
    theta, w = gauss_legendre(n, th_hi, th_lo)
    t = mid + half * np.cos(theta)
    return t, w

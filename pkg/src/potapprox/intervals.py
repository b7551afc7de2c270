"""Finite unions of closed real intervals and nested exhaustion sequences.

Every computation in this package lives on a compact set

    E = [a_1, b_1] u [a_2, b_2] u ... u [a_m, b_m],
    a_1 < b_1 < a_2 < ... < a_m < b_m.

This module owns construction and normalization of such sets, membership
queries, cosine-spaced sampling grids, and middle-gap generators of nested
interval unions shrinking toward Cantor-type sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "IntervalSet",
    "ExhaustionSequence",
    "normalize",
    "parse_bands",
    "chebyshev_grid",
    "cantor_exhaustion",
]


@dataclass(frozen=True)
class IntervalSet:
    """An ordered union of pairwise-disjoint closed intervals ("bands").

    Instances are expected to come from :func:`normalize`, which sorts the
    bands and merges overlaps; the constructor only validates.  Immutable,
    so instances can be shared freely between threads.
    """

    bands: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.bands:
            raise ValueError("interval set needs at least one band")
        for a, b in self.bands:
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ValueError(f"band ({a}, {b}) has a non-finite endpoint")
            if not a < b:
                raise ValueError(f"band ({a}, {b}) is empty or reversed")
        for (_, b0), (a1, _) in zip(self.bands, self.bands[1:]):
            if not b0 < a1:
                raise ValueError("bands must be strictly disjoint and sorted")

    @property
    def band_count(self) -> int:
        return len(self.bands)

    @property
    def carrier(self) -> tuple[float, float]:
        """Smallest interval containing the set."""
        return self.bands[0][0], self.bands[-1][1]

    @property
    def diameter(self) -> float:
        a, b = self.carrier
        return b - a

    @property
    def total_length(self) -> float:
        return float(sum(b - a for a, b in self.bands))

    @property
    def gaps(self) -> tuple[tuple[float, float], ...]:
        """Open intervals separating consecutive bands."""
        return tuple(
            (b0, a1) for (_, b0), (a1, _) in zip(self.bands, self.bands[1:])
        )

    def endpoints(self) -> np.ndarray:
        """All band endpoints, sorted ascending."""
        return np.array([e for band in self.bands for e in band])

    def contains(self, x: float) -> bool:
        return any(a <= x <= b for a, b in self.bands)

    def interior_contains(self, x: float) -> bool:
        return any(a < x < b for a, b in self.bands)

    def band_index(self, x: float) -> int | None:
        """Index of the band with x in its closure, or None."""
        for j, (a, b) in enumerate(self.bands):
            if a <= x <= b:
                return j
        return None

    def interior_band_index(self, x: float) -> int | None:
        for j, (a, b) in enumerate(self.bands):
            if a < x < b:
                return j
        return None

    def distance_to(self, z: complex) -> float:
        """Euclidean distance from a complex point to the set."""
        z = complex(z)
        best = math.inf
        for a, b in self.bands:
            dx = max(a - z.real, 0.0, z.real - b)
            best = min(best, math.hypot(dx, z.imag))
        return best

    def scaled(self, scale: float, shift: float = 0.0) -> "IntervalSet":
        """Affine image scale*E + shift (scale > 0)."""
        if scale <= 0:
            raise ValueError("scale must be positive")
        return IntervalSet(
            tuple((scale * a + shift, scale * b + shift) for a, b in self.bands)
        )


def normalize(raw_bands) -> IntervalSet:
    """Sort raw (a, b) pairs and merge overlapping or touching bands.

    Touching bands (b_j == a_{j+1}) are merged; as point sets they are the
    same union.  Idempotent: normalizing the bands of an IntervalSet
    reproduces them.
    """
    pairs = [(float(a), float(b)) for a, b in raw_bands]
    if not pairs:
        raise ValueError("no bands given")
    for a, b in pairs:
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"band ({a}, {b}) has a non-finite endpoint")
        if not a < b:
            raise ValueError(f"band ({a}, {b}) is empty or reversed")
    pairs.sort()
    merged = [pairs[0]]
    for a, b in pairs[1:]:
        pa, pb = merged[-1]
        if a <= pb:  # overlap or touch
            merged[-1] = (pa, max(pb, b))
        else:
            merged.append((a, b))
    return IntervalSet(tuple(merged))


def parse_bands(text: str) -> IntervalSet:
    """Parse the textual set syntax "a1,b1;a2,b2;..." used by the CLI."""
    bands = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ValueError(f"cannot parse interval {chunk!r}; expected 'a,b'")
        try:
            bands.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ValueError(f"cannot parse interval {chunk!r}: {exc}") from None
    return normalize(bands)


def chebyshev_grid(E: IntervalSet, points_per_band: int) -> np.ndarray:
    """Cosine-spaced nodes on every band, endpoints included.

    Per band [a, b] the nodes are mid + half*cos(pi*k/(N-1)), k = 0..N-1,
    sorted ascending; the clustering toward endpoints matches where sup
    norms of polynomial residuals are attained.
    """
    if points_per_band < 2:
        raise ValueError("points_per_band must be at least 2")
    n = points_per_band
    theta = np.pi * np.arange(n) / (n - 1)
    cosine = np.cos(theta)[::-1]  # ascending in t
    out = []
    for a, b in E.bands:
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        t = mid + half * cosine
        t[0], t[-1] = a, b  # pin endpoints exactly
        out.append(t)
    return np.concatenate(out)


@dataclass(frozen=True)
class ExhaustionSequence:
    """A nested chain of interval unions, levels[j+1] inside levels[j]."""

    levels: tuple[IntervalSet, ...]
    description: str = ""

    def __post_init__(self) -> None:
        if not self.levels:
            raise ValueError("exhaustion needs at least one level")
        for j, (outer, inner) in enumerate(zip(self.levels, self.levels[1:])):
            tol = 1e-12 * max(1.0, outer.diameter)
            for a, b in inner.bands:
                if not any(
                    pa - tol <= a and b <= pb + tol for pa, pb in outer.bands
                ):
                    raise ValueError(
                        f"level {j + 1} band ({a}, {b}) is not nested in level {j}"
                    )


def cantor_exhaustion(
    ratio: float, levels: int, carrier: tuple[float, float] = (0.0, 1.0)
) -> ExhaustionSequence:
    """Middle-gap construction: remove the central fraction of every band.

    Level k has 2**k bands; level 0 is the carrier itself.  The returned
    sequence holds levels 0..levels inclusive.  With ratio = 1/3 this is
    the classical middle-third construction.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must lie strictly between 0 and 1")
    if levels < 0:
        raise ValueError("levels must be nonnegative")
    lo, hi = float(carrier[0]), float(carrier[1])
    if not lo < hi:
        raise ValueError("carrier must be a nonempty interval")
    keep = 0.5 * (1.0 - ratio)  # fraction kept on each side
    current = [(lo, hi)]
    seq = [IntervalSet(tuple(current))]
    for _ in range(levels):
        nxt = []
        for a, b in current:
            w = (b - a) * keep
            nxt.append((a, a + w))
            nxt.append((b - w, b))
        current = nxt
        seq.append(IntervalSet(tuple(current)))
    return ExhaustionSequence(
        tuple(seq), description=f"middle-gap ratio={ratio} on [{lo}, {hi}]"
    )

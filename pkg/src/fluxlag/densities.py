"""Initial density presets and their closed-form distribution functions.

Every preset is a unit-mass density with connected compact support; the
distribution function is strictly increasing on the support so that the
pseudo-inverse is single valued.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

MASS_SLACK = 1e-6  # auto-normalize below this deviation, reject above

_SQRT2 = math.sqrt(2.0)


class DensityError(ValueError):
    """Unusable initial density (wrong mass, negativity, interior plateau...)."""


@dataclass(frozen=True)
class InitialDensity:
    """Compactly supported probability density with a closed-form CDF."""

    name: str
    support: tuple[float, float]
    pdf: Callable[[float], float]
    _cdf: Callable[[float], float]

    def cdf(self, x: float) -> float:
        """Cumulative mass in [0, 1]; clamps outside the support."""
        a, b = self.support
        if x <= a:
            return 0.0
        if x >= b:
            return 1.0
        return min(max(self._cdf(x), 0.0), 1.0)

    def __repr__(self):
        a, b = self.support
        return f"InitialDensity({self.name!r}, support=[{a}, {b}])"


def indicator(a: float = -0.5, b: float = 0.5) -> InitialDensity:
    """Flat density 1/(b-a) on [a, b]."""
    if not b > a:
        raise DensityError(f"indicator needs b > a, got [{a}, {b}]")
    h = 1.0 / (b - a)
    return InitialDensity(
        "indicator",
        (a, b),
        lambda x: h if a <= x <= b else 0.0,
        lambda x: (x - a) * h,
    )


def triangle() -> InitialDensity:
    """u0(x) = (1 - |x|)_+ on [-1, 1]."""

    def cdf(x):
        if x <= 0.0:
            return 0.5 * (1.0 + x) ** 2
        return 1.0 - 0.5 * (1.0 - x) ** 2

    return InitialDensity(
        "triangle",
        (-1.0, 1.0),
        lambda x: max(1.0 - abs(x), 0.0),
        cdf,
    )


def composite_sqrt() -> InitialDensity:
    """Flat pedestal of height 1/4 on [-1, 1] plus a sqrt bump on [-1/2, 1/2].

    The bump (3 / 2 sqrt(2)) * sqrt(1/2 - |x|) joins the pedestal with a
    vertical tangent at x = +-1/2; total mass is exactly 1.
    """
    amp = 3.0 / (2.0 * _SQRT2)

    def pdf(x):
        if not -1.0 <= x <= 1.0:
            return 0.0
        u = 0.25
        if abs(x) <= 0.5:
            u += amp * math.sqrt(0.5 - abs(x))
        return u

    def cdf(x):
        base = 0.25 * (x + 1.0)
        if x <= -0.5:
            return base
        if x <= 0.0:
            return base + (0.5 + x) ** 1.5 / _SQRT2
        if x <= 0.5:
            return base + 0.5 - (0.5 - x) ** 1.5 / _SQRT2
        return base + 0.5

    return InitialDensity("composite_sqrt", (-1.0, 1.0), pdf, cdf)


def composite_step() -> InitialDensity:
    """Piecewise constant: 1/4 on [-1, -1/2] and [1/2, 1], 3/4 on [-1/2, 1/2]."""

    def pdf(x):
        if not -1.0 <= x <= 1.0:
            return 0.0
        return 0.75 if abs(x) <= 0.5 else 0.25

    def cdf(x):
        if x <= -0.5:
            return 0.25 * (x + 1.0)
        if x <= 0.5:
            return 0.125 + 0.75 * (x + 0.5)
        return 0.875 + 0.25 * (x - 0.5)

    return InitialDensity("composite_step", (-1.0, 1.0), pdf, cdf)


def piecewise(breaks, coeffs) -> InitialDensity:
    """Piecewise polynomial density of degree <= 2.

    ``breaks`` are the k+1 breakpoints and ``coeffs`` the k coefficient
    triples (c0, c1, c2) with u(x) = c0 + c1 x + c2 x^2 on each piece.
    The total mass must be 1 to within 1e-6 (the density is renormalized
    inside that slack); pieces that are negative or identically zero in
    the interior are rejected so the CDF stays strictly increasing.
    """
    breaks = np.asarray(breaks, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    if breaks.ndim != 1 or breaks.size < 2 or np.any(np.diff(breaks) <= 0):
        raise DensityError("breakpoints must be strictly increasing, length >= 2")
    if coeffs.shape != (breaks.size - 1, 3):
        raise DensityError(
            f"need one (c0, c1, c2) triple per piece, got shape {coeffs.shape}"
        )

    k = coeffs.shape[0]
    for j in range(k):
        lo, hi = breaks[j], breaks[j + 1]
        c0, c1, c2 = coeffs[j]
        vals = [c0 + c1 * lo + c2 * lo * lo, c0 + c1 * hi + c2 * hi * hi]
        if c2 != 0.0:
            xv = -c1 / (2.0 * c2)
            if lo < xv < hi:
                vals.append(c0 + c1 * xv + c2 * xv * xv)
        if min(vals) < 0.0:
            raise DensityError(f"piece {j} is negative on [{lo}, {hi}]")
        if max(vals) == 0.0:
            # isolated zeros keep the CDF strictly increasing; a whole zero
            # piece is an interior plateau and the generalized inverse would
            # silently pick the infimum, so reject instead
            raise DensityError(f"piece {j} is identically zero (interior plateau)")

    # exact piecewise integration of the quadratics
    def piece_mass(j, lo, hi):
        c0, c1, c2 = coeffs[j]
        f = lambda x: c0 * x + 0.5 * c1 * x * x + c2 * x ** 3 / 3.0
        return f(hi) - f(lo)

    masses = np.array([piece_mass(j, breaks[j], breaks[j + 1]) for j in range(k)])
    total = masses.sum()
    if abs(total - 1.0) > MASS_SLACK:
        raise DensityError(f"total mass {total!r} deviates from 1 by more than 1e-6")
    scale = 1.0 / total
    cum = np.concatenate(([0.0], np.cumsum(masses))) * scale

    def pdf(x):
        if x < breaks[0] or x > breaks[-1]:
            return 0.0
        j = min(np.searchsorted(breaks, x, side="right") - 1, k - 1)
        j = max(j, 0)
        c0, c1, c2 = coeffs[j]
        return scale * (c0 + c1 * x + c2 * x * x)

    def cdf(x):
        j = min(max(np.searchsorted(breaks, x, side="right") - 1, 0), k - 1)
        return cum[j] + scale * piece_mass(j, breaks[j], x)

    return InitialDensity("piecewise", (float(breaks[0]), float(breaks[-1])), pdf, cdf)


_PRESETS = {
    "indicator": indicator,
    "triangle": triangle,
    "composite_sqrt": composite_sqrt,
    "composite_step": composite_step,
    "piecewise": piecewise,
}


def make_density(preset: str, params: dict | None = None) -> InitialDensity:
    """Build a preset density from a config-style (name, params) pair."""
    if preset not in _PRESETS:
        raise DensityError(f"unknown density preset {preset!r}")
    return _PRESETS[preset](**(params or {}))

"""Closed-form comparison solutions and self-similar machinery.

Profiles: the homogeneous-limit solution u_hom, the Gaussian self-similar
solution of the heat equation, Barenblatt profiles for m > 1, their
stationary counterparts in similarity variables, and the power-law
supersolution used as a comparison-principle oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import erf


# ---------------------------------------------------------------------------
# explicit solutions

def eval_u_hom(x, t):
    """Homogeneous-limit solution: (1 + 2t)^-1 on [-1/2 - t, 1/2 + t]."""
    if t < 0:
        raise ValueError("t must be >= 0")
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) <= 0.5 + t
    return np.where(inside, 1.0 / (1.0 + 2.0 * t), 0.0)


def eval_selfsim_heat(x, t):
    """Heat-kernel profile exp(-x^2 / 4t) / sqrt(4 pi t)."""
    if t <= 0:
        raise ValueError("t must be > 0")
    x = np.asarray(x, dtype=float)
    return np.exp(-x * x / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)


def _quadratic_profile_mass(c, b, q):
    """Mass of (c - b y^2)_+^q over the real line."""
    if c <= 0:
        return 0.0
    ystar = math.sqrt(c / b)
    val, _ = quad(lambda y: (max(c - b * y * y, 0.0)) ** q, -ystar, ystar, limit=200)
    return val


@lru_cache(maxsize=None)
def barenblatt_constant(m: float) -> float:
    """C such that the Barenblatt profile at t = 1 has unit mass (m > 1)."""
    if m <= 1:
        raise ValueError("Barenblatt profiles need m > 1")
    b = (m - 1.0) / (2.0 * m * (m + 1.0))
    q = 1.0 / (m - 1.0)
    f = lambda c: _quadratic_profile_mass(c, b, q) - 1.0
    hi = 1.0
    while f(hi) < 0:
        hi *= 2.0
    return brentq(f, 1e-12, hi, xtol=1e-14, rtol=8.9e-16)


def eval_barenblatt(x, t, m):
    """Self-similar Barenblatt solution for m > 1."""
    if t <= 0:
        raise ValueError("t must be > 0")
    c = barenblatt_constant(m)
    b = (m - 1.0) / (2.0 * m * (m + 1.0))
    k = 1.0 / (m + 1.0)
    x = np.asarray(x, dtype=float)
    arg = c - b * x * x * t ** (-2.0 * k)
    return t ** (-k) * np.where(arg > 0.0, arg, 0.0) ** (1.0 / (m - 1.0))


def barenblatt_front(t, m) -> float:
    """Free-boundary radius of the Barenblatt solution."""
    c = barenblatt_constant(m)
    b = (m - 1.0) / (2.0 * m * (m + 1.0))
    return math.sqrt(c / b) * t ** (1.0 / (m + 1.0))


def eval_stationary_gaussian(x):
    """Standard Gaussian: the m = 1 attractor in similarity variables."""
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


@lru_cache(maxsize=None)
def stationary_barenblatt_constant(m: float) -> float:
    """C such that (C - (m-1) y^2 / 2)_+^(1/(m-1)) has unit mass."""
    if m <= 1:
        raise ValueError("Barenblatt profiles need m > 1")
    b = 0.5 * (m - 1.0)
    q = 1.0 / (m - 1.0)
    f = lambda c: _quadratic_profile_mass(c, b, q) - 1.0
    hi = 1.0
    while f(hi) < 0:
        hi *= 2.0
    return brentq(f, 1e-12, hi, xtol=1e-14, rtol=8.9e-16)


def eval_stationary_barenblatt(x, m):
    c = stationary_barenblatt_constant(m)
    x = np.asarray(x, dtype=float)
    arg = c - 0.5 * (m - 1.0) * x * x
    return np.where(arg > 0.0, arg, 0.0) ** (1.0 / (m - 1.0))


# ---------------------------------------------------------------------------
# self-similar rescaling

@dataclass
class RescaledSample:
    """(y, v) samples in similarity variables."""

    t: float
    sigma: float
    y: np.ndarray
    v: np.ndarray


def selfsim_rescale(sample, m) -> RescaledSample:
    """Map a physical-time sample to similarity variables.

    Uses y = sigma x, v = u / sigma with sigma = (m (m+1) t)^(-1/(m+1)),
    which sends the self-similar solution at any t exactly onto its
    stationary profile (Gaussian for m = 1, Barenblatt for m > 1) and
    preserves mass exactly.
    """
    t = sample.t
    if t <= 0:
        raise ValueError("rescaling needs t > 0")
    sigma = (m * (m + 1.0) * t) ** (-1.0 / (m + 1.0))
    return RescaledSample(t=t, sigma=sigma, y=sample.x * sigma, v=sample.u / sigma)


# ---------------------------------------------------------------------------
# power supersolution (comparison-principle oracle)

def eval_power_supersolution(x, t, alpha, a0, adot, r0):
    """U(t, x) = A(t) (R(t)^2 - x^2)_+^alpha with A = a0 + adot t, R = r0 + t."""
    _check_super(alpha, adot)
    x = np.asarray(x, dtype=float)
    A = a0 + adot * t
    R = r0 + t
    arg = R * R - x * x
    return A * np.where(arg > 0.0, arg, 0.0) ** alpha


def supersolution_residual(alpha, a0, adot, r0, ts, xs):
    """U_t - d/dx [U U_x / sqrt(U^2 + U_x^2)] on a (t, x) grid, analytically.

    All grid points must satisfy |x| < R(t).  Nonnegativity of the result
    is exactly the supersolution property for the m = 1 equation.
    """
    _check_super(alpha, adot)
    ts = np.asarray(ts, dtype=float)
    xs = np.asarray(xs, dtype=float)
    t = ts[:, None]
    x = xs[None, :]
    R = r0 + t
    if np.any(np.abs(x) >= R):
        raise ValueError("grid point outside the open support |x| < R(t)")
    A = a0 + adot * t
    S = R * R - x * x  # > 0 on the open support
    Q = np.sqrt(S * S + 4.0 * alpha * alpha * x * x)
    u_t = adot * S ** alpha + 2.0 * A * alpha * R * S ** (alpha - 1.0)
    q_x = 2.0 * x * (2.0 * alpha * alpha - S) / Q
    flux_x = -2.0 * A * alpha * (
        S ** alpha / Q
        - 2.0 * alpha * x * x * S ** (alpha - 1.0) / Q
        - x * S ** alpha * q_x / (Q * Q)
    )
    return u_t - flux_x


def _check_super(alpha, adot):
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    if adot < 0:
        raise ValueError("the comparison construction needs A'(t) >= 0")


# ---------------------------------------------------------------------------
# named profiles for configs and metrics

class ReferenceProfile:
    """Evaluable reference with partial integrals, addressable by name."""

    def __init__(self, kind: str, m: float = 1.0):
        if kind == "barenblatt" and m <= 1:
            raise ValueError("barenblatt reference needs m > 1")
        if kind not in ("u_hom", "selfsim_heat", "barenblatt"):
            raise ValueError(f"unknown reference {kind!r}")
        self.kind = kind
        self.m = float(m)

    def density(self, x, t):
        if self.kind == "u_hom":
            return eval_u_hom(x, t)
        if self.kind == "selfsim_heat":
            return eval_selfsim_heat(x, t)
        return eval_barenblatt(x, t, self.m)

    def integral(self, a, b, t) -> float:
        """Mass of the profile on [a, b] at time t."""
        if self.kind == "u_hom":
            half = 0.5 + t
            lo, hi = max(a, -half), min(b, half)
            return max(hi - lo, 0.0) / (1.0 + 2.0 * t)
        if self.kind == "selfsim_heat":
            s = math.sqrt(4.0 * t)
            return 0.5 * (erf(b / s) - erf(a / s))
        front = barenblatt_front(t, self.m)
        lo, hi = max(a, -front), min(b, front)
        if hi <= lo:
            return 0.0
        val, _ = quad(lambda x: float(eval_barenblatt(x, t, self.m)), lo, hi, limit=200)
        return val

    def __repr__(self):
        return f"ReferenceProfile({self.kind!r}, m={self.m})"


def make_reference(name: str | None, m: float) -> ReferenceProfile | None:
    if name is None:
        return None
    return ReferenceProfile(name, m=m)

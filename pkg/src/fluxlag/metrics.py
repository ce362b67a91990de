"""Error estimators, front diagnostics, and rate fitting.

``l1_error_paper`` is the node-averaged estimate (1/N) sum |u(x_i) - ref(x_i)|
over all N Lagrangian nodes; ``l1_error_quadrature`` is the trapezoid-weighted
variant plus the reference mass outside the numerical support, which is the
honest mesh-independent L1 distance.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .reference import ReferenceProfile
from .transform import DensitySample, PseudoInverseState, reconstruct

# |psi_eta| above this at the first/last interior segment counts as a
# numerically vertical contact angle
CONTACT_ANGLE_THRESHOLD = 1e2
# bulk |psi_eta| above this flags a forming jump
DISCONTINUITY_THRESHOLD = 1e3


@dataclass
class MetricsRecord:
    """One row of per-snapshot diagnostics; serializes to one NDJSON line."""

    t: float
    l1_paper: float | None
    l1_quadrature: float | None
    support_left: float
    support_right: float
    u_max: float
    max_interior_abs_psi_eta: float
    liftoff_left: float
    liftoff_right: float
    w_max: float

    def to_json(self) -> str:
        # key order is part of the on-disk contract
        return json.dumps(
            {
                "t": self.t,
                "l1_paper": self.l1_paper,
                "l1_quadrature": self.l1_quadrature,
                "support_left": self.support_left,
                "support_right": self.support_right,
                "u_max": self.u_max,
                "max_interior_abs_psi_eta": self.max_interior_abs_psi_eta,
                "liftoff_left": self.liftoff_left,
                "liftoff_right": self.liftoff_right,
                "w_max": self.w_max,
            }
        )


def l1_error_paper(sample: DensitySample, ref: ReferenceProfile, t: float) -> float:
    """(1/N) sum_i |u(x_i) - ref(x_i, t)| over all N nodes."""
    diff = np.abs(sample.u - ref.density(sample.x, t))
    return float(diff.sum() / sample.x.size)


def l1_error_quadrature(sample: DensitySample, ref: ReferenceProfile, t: float) -> float:
    """Trapezoid L1 distance on the sample plus reference mass outside it."""
    diff = np.abs(sample.u - ref.density(sample.x, t))
    inside = float(np.trapezoid(diff, sample.x))
    a, b = sample.support
    outside = 1.0 - ref.integral(a, b, t)
    return inside + max(outside, 0.0)


def rate_fit(ts, errs, window: tuple[float, float]) -> tuple[float, float]:
    """Least-squares slope and intercept of log err vs log t inside ``window``."""
    ts = np.asarray(ts, dtype=float)
    errs = np.asarray(errs, dtype=float)
    lo, hi = window
    keep = (ts >= lo) & (ts <= hi) & (ts > 0) & (errs > 0)
    if keep.sum() < 3:
        raise ValueError(f"need >= 3 positive points in window [{lo}, {hi}]")
    slope, intercept = np.polyfit(np.log(ts[keep]), np.log(errs[keep]), 1)
    return float(slope), float(intercept)


def liftoff_indicator(state: PseudoInverseState, params) -> tuple[float, float]:
    """Boundary values of the discrete (psi^(m+1))_eta, signed for outward growth.

    Both values diverge under mesh refinement exactly when the boundary
    power profile psi ~ C (1/2 - |eta|)^p has p < 1/(m+1); they vanish for
    p above the threshold.
    """
    sample = reconstruct(state, params.psi_eta_cap)
    return _liftoff_from_psi(sample.u, state.mesh.spacings, params.m)


def _liftoff_from_psi(psi, d, m):
    q = m + 1.0
    left = (psi[2] ** q - psi[1] ** q) / d[1]
    right = -(psi[-2] ** q - psi[-3] ** q) / d[-2]
    return float(left), float(right)


def bulk_max_psi_eta(sample: DensitySample) -> tuple[float, float]:
    """Max |psi_eta| strictly inside the support and its location in x.

    The two interior nodes adjacent to the support ends are excluded: their
    psi_eta encodes the vertical contact angle, not a bulk jump.
    """
    core = np.abs(sample.psi_eta[2:-2])
    if core.size == 0:
        return 0.0, 0.0
    i = int(np.argmax(core)) + 2
    return float(np.abs(sample.psi_eta[i])), float(sample.x[i])


def discontinuity_indicator(trajectory) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-snapshot (t, max bulk |psi_eta|, location) time series."""
    ts, vals, locs = [], [], []
    for snap in trajectory.snapshots:
        sample = reconstruct(snap)
        v, x = bulk_max_psi_eta(sample)
        ts.append(snap.t)
        vals.append(v)
        locs.append(x)
    return np.asarray(ts), np.asarray(vals), np.asarray(locs)


def metrics_record(
    state: PseudoInverseState, params, ref: ReferenceProfile | None
) -> MetricsRecord:
    sample = reconstruct(state, params.psi_eta_cap)
    left, right = _liftoff_from_psi(sample.u, state.mesh.spacings, params.m)
    bulk, _ = bulk_max_psi_eta(sample)
    l1p = l1q = None
    if ref is not None and (ref.kind == "u_hom" or state.t > 0):
        l1p = l1_error_paper(sample, ref, state.t)
        l1q = l1_error_quadrature(sample, ref, state.t)
    return MetricsRecord(
        t=state.t,
        l1_paper=l1p,
        l1_quadrature=l1q,
        support_left=sample.support[0],
        support_right=sample.support[1],
        u_max=sample.u_max,
        max_interior_abs_psi_eta=bulk,
        liftoff_left=left,
        liftoff_right=right,
        w_max=float(np.abs(sample.w).max()),
    )

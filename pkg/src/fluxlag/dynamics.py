"""Explicit Euler time integration of the Lagrangian flux-limited equation.

Interior particles move with

    phi_t = -nu * psi^(m-1) * psi_eta / sqrt(1 + nu^2 * psi_eta^2)

while the end particles carry the support and move at the boundary trace
speed -+ psi^(m-1) taken at the adjacent interior node.  The time step obeys
the parabolic CFL rule dt = dmin^2 / (alpha_cfl * nu * max psi^m).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .transform import (
    PSI_ETA_CAP,
    PseudoInverseState,
    StateError,
    reconstruct,
    track_argmax_from_psi,
)

MAX_LOG_ROWS = 20_000


class SolverError(RuntimeError):
    """Hard integration failure; carries the partial trajectory when known."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


@dataclass(frozen=True)
class SchemeParams:
    """Physical (m, nu) and numerical (CFL, caps) parameters."""

    m: float = 1.0
    nu: float = 1.0
    alpha_cfl: float = 8.0
    dt_max: float | None = None
    psi_eta_cap: float = PSI_ETA_CAP

    def __post_init__(self):
        if self.m < 1.0:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.nu <= 0.0:
            raise ValueError(f"nu must be > 0, got {self.nu}")
        if self.alpha_cfl <= 2.0:
            raise ValueError(f"alpha_cfl must be > 2, got {self.alpha_cfl}")
        if self.dt_max is not None and self.dt_max <= 0.0:
            raise ValueError("dt_max must be positive when set")


@dataclass
class StepLog:
    """Strided per-step samples (t, dt, u_max, support endpoints)."""

    t: np.ndarray
    dt: np.ndarray
    u_max: np.ndarray
    support_left: np.ndarray
    support_right: np.ndarray
    stride: int


@dataclass
class Trajectory:
    snapshots: list[PseudoInverseState] = field(default_factory=list)
    log: StepLog | None = None
    n_steps: int = 0
    max_abs_phi_t: float = 0.0
    termination: str = "completed"


def rhs(state: PseudoInverseState, params: SchemeParams) -> np.ndarray:
    """Per-node particle velocity phi_t."""
    sample = reconstruct(state, params.psi_eta_cap)
    psi, psi_eta = sample.u, sample.psi_eta
    m, nu = params.m, params.nu
    s = nu * psi_eta
    out = -s / np.sqrt(1.0 + s * s)
    if m != 1.0:
        out *= psi ** (m - 1.0)
        out[0] = -(psi[1] ** (m - 1.0))
        out[-1] = psi[-2] ** (m - 1.0)
    else:
        out[0] = -1.0
        out[-1] = 1.0
    if not np.all(np.isfinite(out)):
        bad = int(np.flatnonzero(~np.isfinite(out))[0])
        raise SolverError(f"non-finite velocity at node {bad}")
    return out


def cfl_dt(state: PseudoInverseState, params: SchemeParams) -> float:
    """Stable step: dmin^2 / (alpha_cfl * nu * max psi^m), capped by dt_max.

    nu multiplies the denominator because the effective diffusivity scales
    with it; for nu = 1 this is exactly the usual rule.
    """
    psimax = float(reconstruct(state, params.psi_eta_cap).u.max())
    if psimax <= 0.0:
        raise SolverError("fully degenerate state: max psi is 0")
    dmin = state.mesh.min_spacing
    dt = dmin * dmin / (params.alpha_cfl * params.nu * psimax ** params.m)
    if params.dt_max is not None:
        dt = min(dt, params.dt_max)
    return dt


def track_argmax(state: PseudoInverseState, params: SchemeParams | None = None) -> int:
    """Interior index of the density maximum, sticky on ties."""
    sample = reconstruct(state, params.psi_eta_cap if params else PSI_ETA_CAP)
    return track_argmax_from_psi(sample.u, previous=state.argmax_idx)


def step(state: PseudoInverseState, params: SchemeParams, dt: float | None = None) -> PseudoInverseState:
    """One explicit Euler step; raises SolverError if monotonicity breaks."""
    if dt is None:
        dt = cfl_dt(state, params)
    vel = rhs(state, params)
    new = PseudoInverseState(state.t + dt, state.phi + dt * vel, state.mesh, state.argmax_idx)
    try:
        new.validate()
    except StateError as exc:
        raise SolverError(f"step from t={state.t} broke an invariant: {exc}") from exc
    new.argmax_idx = track_argmax(new, params)
    return new


def run(
    state: PseudoInverseState,
    params: SchemeParams,
    snapshot_times,
    t_end: float,
    log_stride: int | None = None,
) -> Trajectory:
    """Integrate to ``t_end``, emitting exact-time snapshots.

    The initial state is always the first snapshot.  Deterministic: the
    step sequence depends only on the inputs.
    """
    times = sorted(float(s) for s in snapshot_times)
    if times and (times[0] < state.t or times[-1] > t_end):
        raise ValueError("snapshot times must lie in [t_start, t_end]")
    if t_end < state.t:
        raise ValueError("t_end before the current time")
    targets = [s for s in times if s > state.t]
    if not targets or targets[-1] < t_end:
        targets.append(t_end)

    dt_max = params.dt_max if params.dt_max is not None else np.inf
    if log_stride is None:
        log_stride = _auto_stride(state, params, t_end)
    log_t = np.empty(MAX_LOG_ROWS)
    log_dt = np.empty(MAX_LOG_ROWS)
    log_umax = np.empty(MAX_LOG_ROWS)
    log_sl = np.empty(MAX_LOG_ROWS)
    log_sr = np.empty(MAX_LOG_ROWS)
    log_count = 0

    work = state.copy()
    traj = Trajectory(snapshots=[state.copy()])
    t, amax = work.t, work.argmax_idx
    for t_target in targets:
        t, amax, steps, mphit, status, bad, log_count = _kernel.advance(
            work.phi,
            work.mesh.spacings,
            float(params.m),
            float(params.nu),
            float(params.alpha_cfl),
            float(dt_max),
            float(params.psi_eta_cap),
            t,
            t_target,
            amax,
            log_t,
            log_dt,
            log_umax,
            log_sl,
            log_sr,
            log_stride,
            log_count,
        )
        traj.n_steps += steps
        traj.max_abs_phi_t = max(traj.max_abs_phi_t, mphit)
        if status != 0:
            _finish_log(traj, log_t, log_dt, log_umax, log_sl, log_sr, log_count, log_stride)
            reason = (
                f"monotonicity broken at node {bad}, t={t:.6g}"
                if status == 1
                else f"degenerate state (max psi = 0) at t={t:.6g}"
            )
            traj.termination = reason
            raise SolverError(reason, trajectory=traj)
        snap = PseudoInverseState(t, work.phi.copy(), work.mesh, amax)
        snap.validate()
        if t in times or t == t_end:
            traj.snapshots.append(snap)
    _finish_log(traj, log_t, log_dt, log_umax, log_sl, log_sr, log_count, log_stride)
    return traj


def _auto_stride(state, params, t_end) -> int:
    """Pick a log stride that keeps the per-step log under MAX_LOG_ROWS."""
    try:
        dt0 = cfl_dt(state, params)
    except SolverError:
        return 1
    est = (t_end - state.t) / max(dt0, 1e-300)
    return max(1, int(est / (MAX_LOG_ROWS // 2)) + 1)


def _finish_log(traj, log_t, log_dt, log_umax, log_sl, log_sr, count, stride):
    traj.log = StepLog(
        t=log_t[:count].copy(),
        dt=log_dt[:count].copy(),
        u_max=log_umax[:count].copy(),
        support_left=log_sl[:count].copy(),
        support_right=log_sr[:count].copy(),
        stride=stride,
    )

"""Change of variables between densities and pseudo-inverse CDFs.

The evolved unknown is phi(t, eta): the position of the particle carrying
cumulative mass eta + 1/2.  ``init_pseudo_inverse`` inverts the CDF of an
initial density onto a mass mesh; ``reconstruct`` maps a state back to
(x, u) samples with the directional finite differences of the scheme.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .densities import InitialDensity
from .mesh import MassMesh

PSI_ETA_CAP = 1e12  # overflow guard only; the RHS is bounded in psi_eta


class StateError(ValueError):
    """Broken state invariant (non-monotone phi, non-finite values)."""


@dataclass
class PseudoInverseState:
    """Particle positions phi at the mesh nodes at time t."""

    t: float
    phi: np.ndarray
    mesh: MassMesh
    argmax_idx: int

    def validate(self):
        if self.phi.shape != self.mesh.nodes.shape:
            raise StateError("phi and mesh size mismatch")
        if not np.all(np.isfinite(self.phi)):
            raise StateError("non-finite particle position")
        if np.any(np.diff(self.phi) <= 0):
            i = int(np.argmin(np.diff(self.phi)))
            raise StateError(f"phi is not strictly increasing at node {i}")
        if not 1 <= self.argmax_idx <= self.mesh.n - 2:
            raise StateError(f"argmax index {self.argmax_idx} not interior")

    @property
    def support(self) -> tuple[float, float]:
        return float(self.phi[0]), float(self.phi[-1])

    def copy(self) -> "PseudoInverseState":
        return PseudoInverseState(self.t, self.phi.copy(), self.mesh, self.argmax_idx)


@dataclass
class DensitySample:
    """Reconstructed (x, u) samples plus slope diagnostics at one instant."""

    t: float
    x: np.ndarray
    u: np.ndarray
    psi_eta: np.ndarray
    w: np.ndarray
    support: tuple[float, float]
    u_max: float
    u_argmax_idx: int

    def trapezoid_mass(self) -> float:
        """Trapezoid mass over the interior nodes.

        The end nodes carry u = 0 by convention and can sit far from the
        bulk once the support endpoints run ahead of it, so interpolating
        across the two boundary cells would count spurious sliver mass.
        Each omitted cell holds exactly one mass-coordinate spacing.
        """
        return float(np.trapezoid(self.u[1:-1], self.x[1:-1]))


def init_pseudo_inverse(density: InitialDensity, mesh: MassMesh) -> PseudoInverseState:
    """Invert the CDF of ``density`` on the mesh nodes (state at t = 0).

    Interior nodes are placed by bracketed root finding on the closed-form
    CDF; the end nodes sit exactly on the support endpoints.
    """
    a, b = density.support
    n = mesh.n
    phi = np.empty(n)
    phi[0], phi[-1] = a, b
    for i in range(1, n - 1):
        target = mesh.nodes[i] + 0.5
        phi[i] = brentq(
            lambda x: density.cdf(x) - target, a, b, xtol=1e-14, rtol=8.9e-16
        )
    state = PseudoInverseState(0.0, phi, mesh, argmax_idx=1)
    state.validate()
    state.argmax_idx = track_argmax_from_psi(_psi_of(state), previous=n // 2 - 1)
    return state


def directional_phi_eta(state: PseudoInverseState) -> np.ndarray:
    """phi_eta by forward differences up to the density argmax, backward after."""
    phi, d, amax = state.phi, state.mesh.spacings, state.argmax_idx
    fwd = np.diff(phi) / d
    if np.any(fwd <= 0):
        raise StateError("phi is not strictly increasing")
    fe = np.empty_like(phi)
    fe[: amax + 1] = fwd[: amax + 1]
    fe[amax + 1 :] = fwd[amax:]
    return fe


def _psi_of(state: PseudoInverseState) -> np.ndarray:
    fe = directional_phi_eta(state)
    psi = np.zeros_like(state.phi)
    psi[1:-1] = 1.0 / fe[1:-1]
    return psi


def track_argmax_from_psi(psi: np.ndarray, previous: int) -> int:
    """Interior index of max density; ties keep ``previous``, else smallest."""
    interior = psi[1:-1]
    mx = interior.max()
    if 1 <= previous <= psi.size - 2 and psi[previous] == mx:
        return previous
    return int(np.argmax(interior)) + 1


def reconstruct(state: PseudoInverseState, psi_eta_cap: float = PSI_ETA_CAP) -> DensitySample:
    """Density samples u_i = psi_i at x_i = phi_i with directional slopes.

    psi at the two end nodes is 0 by convention; psi_eta is differenced in
    the direction opposite to phi_eta (backward up to the argmax, forward
    after), which is the stable pairing for this scheme.
    """
    state.validate()
    d, amax = state.mesh.spacings, state.argmax_idx
    psi = _psi_of(state)
    dpsi = np.diff(psi) / d
    psi_eta = np.zeros_like(psi)
    psi_eta[1 : amax + 1] = dpsi[:amax]
    psi_eta[amax + 1 : -1] = dpsi[amax + 1 :]
    np.clip(psi_eta, -psi_eta_cap, psi_eta_cap, out=psi_eta)
    u_argmax = track_argmax_from_psi(psi, previous=amax)
    return DensitySample(
        t=state.t,
        x=state.phi.copy(),
        u=psi,
        psi_eta=psi_eta,
        w=psi * psi_eta,
        support=state.support,
        u_max=float(psi[u_argmax]),
        u_argmax_idx=u_argmax,
    )

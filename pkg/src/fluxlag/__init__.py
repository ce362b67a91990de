"""Lagrangian solver for flux-limited (porous-medium) diffusion in 1D.

The evolved unknown is the pseudo-inverse distribution function of the
density; the mesh lives on the mass interval [-1/2, 1/2] and particles
carry fixed mass fractions, so total mass is conserved by construction.
"""

__version__ = "0.1.0"

from .densities import InitialDensity, make_density  # noqa: F401
from .dynamics import SchemeParams, SolverError, Trajectory, cfl_dt, rhs, run, step  # noqa: F401
from .mesh import MassMesh, MeshError, build_graded_mesh, build_uniform_mesh  # noqa: F401
from .transform import (  # noqa: F401
    DensitySample,
    PseudoInverseState,
    StateError,
    init_pseudo_inverse,
    reconstruct,
)

"""Fixed symmetric partitions of the mass interval [-1/2, 1/2].

Node positions in the mass coordinate eta never move during a run; all
motion lives in the particle positions phi.  Meshes are therefore built
once, validated, and shared freely.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HALF = 0.5


class MeshError(ValueError):
    """Invalid mesh request or broken mesh invariant."""


@dataclass(frozen=True)
class MassMesh:
    """Strictly increasing, symmetric partition of [-1/2, 1/2] with even node count."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        n = nodes.size
        if n < 4 or n % 2 != 0:
            raise MeshError(f"node count must be even and >= 4, got {n}")
        if nodes[0] != -HALF or nodes[-1] != HALF:
            raise MeshError("mesh must span [-1/2, 1/2] exactly")
        d = np.diff(nodes)
        if np.any(d <= 0):
            raise MeshError("mesh nodes must be strictly increasing")
        # symmetry to within a few ulp of 1/2
        asym = np.max(np.abs(nodes + nodes[::-1]))
        if asym > 4 * np.spacing(HALF):
            raise MeshError(f"mesh is not symmetric about 0 (max deviation {asym:.3e})")
        if abs(d.sum() - 1.0) > 10 * n * np.spacing(1.0):
            raise MeshError("spacings do not sum to 1")
        object.__setattr__(self, "spacings", d)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def min_spacing(self) -> float:
        return float(self.spacings.min())

    def __repr__(self):
        return f"MassMesh(n={self.n}, min_spacing={self.min_spacing:.3e})"


def build_uniform_mesh(n: int) -> MassMesh:
    """Equally spaced mesh with ``n`` nodes (n even, >= 4)."""
    if n % 2 != 0 or n < 4:
        raise MeshError(f"node count must be even and >= 4, got {n}")
    nodes = np.linspace(-HALF, HALF, n)
    nodes = _symmetrize(nodes)
    return MassMesh(nodes)


def build_graded_mesh(n: int, focus, ratio: float) -> MassMesh:
    """Mesh whose spacings shrink geometrically toward each focus point.

    ``focus`` is a symmetric set of mass coordinates in (-1/2, 1/2) or the
    endpoints +-1/2; within each span between consecutive focus points the
    spacings form a geometric progression with per-step factor ``ratio``,
    smallest next to the nearer focus.  Spacings are normalized per span so
    the focus points land exactly on nodes.
    """
    if n % 2 != 0 or n < 4:
        raise MeshError(f"node count must be even and >= 4, got {n}")
    if not ratio > 1.0:
        raise MeshError(f"grading ratio must be > 1, got {ratio}")
    focus = sorted(set(float(f) for f in focus))
    if not focus:
        raise MeshError("focus set must not be empty")
    for f in focus:
        if not (-HALF <= f <= HALF):
            raise MeshError(f"focus point {f} outside [-1/2, 1/2]")
        if f == 0.0:
            raise MeshError("focus at 0 would force a node at the center (n is even)")
    mirrored = sorted(-f for f in focus)
    if any(abs(a - b) > 1e-15 for a, b in zip(focus, mirrored)):
        raise MeshError("focus set must be symmetric about 0")

    anchors = sorted(set(focus) | {-HALF, HALF})
    segments = list(zip(anchors[:-1], anchors[1:]))
    k = len(segments)
    if k % 2 == 0:
        # symmetric anchor set without 0 always yields an odd segment count
        raise MeshError("internal error: expected an odd number of segments")

    total = n - 1
    lengths = [b - a for a, b in segments]
    half = k // 2
    counts = [0] * k
    for j in range(half):
        counts[j] = max(1, round(total * lengths[j]))
        counts[k - 1 - j] = counts[j]
    counts[half] = total - 2 * sum(counts[:half])
    if counts[half] < 1:
        raise MeshError(f"too few nodes ({n}) for {len(focus)} focus points")

    focus_set = set(anchors) & set(focus)
    spacings = []
    for (a, b), c in zip(segments, counts):
        left = a in focus_set
        right = b in focus_set
        i = np.arange(c, dtype=float)
        if left and right:
            raw = ratio ** np.minimum(i, c - 1 - i)
        elif left:
            raw = ratio ** i
        else:  # right end is a focus (outermost spans always touch one)
            raw = ratio ** (c - 1 - i)
        spacings.append(raw * ((b - a) / raw.sum()))
    d = np.concatenate(spacings)
    nodes = _symmetrize(-HALF + np.concatenate(([0.0], np.cumsum(d))))
    return MassMesh(nodes)


def _symmetrize(nodes: np.ndarray) -> np.ndarray:
    """Remove floating-point asymmetry and pin the endpoints exactly."""
    nodes = 0.5 * (nodes - nodes[::-1])
    nodes[0] = -HALF
    nodes[-1] = HALF
    return nodes

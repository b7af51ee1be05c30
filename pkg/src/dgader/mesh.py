"""One-dimensional tessellation with periodic or transmissive ends."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DGError

BOUNDARY_KINDS = ("periodic", "transmissive")


class Ghost(NamedTuple):
    """Boundary marker: the exterior trace is a copy of element ``of``."""

    of: int


@dataclass(frozen=True, eq=False)
class Mesh1D:
    """Elements ``[faces[k], faces[k+1]]`` covering ``[x_min, x_max]``."""

    faces: np.ndarray
    boundary_kind: str = "periodic"

    def __post_init__(self):
        faces = np.asarray(self.faces, dtype=float)
        if faces.ndim != 1 or faces.size < 2:
            raise DGError("a mesh needs at least two face coordinates")
        if not np.all(np.diff(faces) > 0):
            raise DGError("face coordinates must be strictly increasing")
        if self.boundary_kind not in BOUNDARY_KINDS:
            raise DGError(f"unknown boundary kind {self.boundary_kind!r}")
        faces.setflags(write=False)
        object.__setattr__(self, "faces", faces)

    @property
    def N(self):
        return self.faces.size - 1

    @property
    def x_min(self):
        return float(self.faces[0])

    @property
    def x_max(self):
        return float(self.faces[-1])

    @property
    def widths(self):
        return np.diff(self.faces)

    @property
    def centers(self):
        return 0.5 * (self.faces[1:] + self.faces[:-1])

    def element_width(self, k):
        return float(self.faces[k + 1] - self.faces[k])

    def to_physical(self, k, xi):
        """Map reference coordinates ``xi`` in [-1, 1] into element ``k``."""
        return self.faces[k] + 0.5 * self.element_width(k) * (np.asarray(xi) + 1.0)

    def locate(self, x):
        """Element index containing each ``x`` (right face belongs to the last element)."""
        k = np.searchsorted(self.faces, x, side="right") - 1
        return np.clip(k, 0, self.N - 1)

    def neighbor(self, k, side):
        if not 0 <= k < self.N:
            raise IndexError(f"element {k} outside mesh of {self.N} elements")
        if side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")
        step = -1 if side == "left" else 1
        j = k + step
        if 0 <= j < self.N:
            return j
        if self.boundary_kind == "periodic":
            return j % self.N
        return Ghost(k)

    def neighbor_indices(self):
        """Arrays ``(left, right)`` of neighbor indices; ghosts point at the element itself."""
        idx = np.arange(self.N)
        if self.boundary_kind == "periodic":
            return np.roll(idx, 1), np.roll(idx, -1)
        left = np.concatenate(([0], idx[:-1]))
        right = np.concatenate((idx[1:], [self.N - 1]))
        return left, right


def build_uniform_mesh(x_min, x_max, N, boundary_kind="periodic"):
    if int(N) != N or N < 1:
        raise DGError(f"element count must be a positive integer, got {N}")
    if not x_min < x_max:
        raise DGError(f"inverted interval [{x_min}, {x_max}]")
    faces = np.linspace(x_min, x_max, int(N) + 1)
    return Mesh1D(faces, boundary_kind)

"""Physical-field reconstruction and plot-ready export.

A similarity profile determines the physical velocity and pressure through
u = U(z/r)/r, v = V(z/r)/r, w = W(z/r)/r and p = P(z/r)/r^2.  The axis
r = 0 is the line vortex and stays excluded; evaluation never extrapolates
beyond the profile's xi range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, OutOfDomainError
from .similarity import SimilarityProfile, atomic_write_text

__all__ = ["PhysicalField", "reconstruct", "export_csv", "export_vtk"]


@dataclass(frozen=True)
class PhysicalField:
    """Velocity/pressure samples on an (r, z) tensor grid.

    Component arrays have shape (len(r_grid), len(z_grid)); v is the
    azimuthal (swirl) component, out of the meridional plane.
    """

    r_grid: np.ndarray
    z_grid: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        shape = (self.r_grid.size, self.z_grid.size)
        for name in ("u", "v", "w", "p"):
            if getattr(self, name).shape != shape:
                raise DomainError(f"field component '{name}' has wrong shape")


def reconstruct(profile: SimilarityProfile, r_grid, z_grid) -> PhysicalField:
    """Evaluate the physical field on the tensor grid r_grid x z_grid.

    U, V, W, P are interpolated at xi = z/r with shape-preserving monotone
    cubics on the profile grid and scaled by 1/r (1/r^2 for pressure).
    Raises :class:`OutOfDomainError` listing every (r, z) pair whose xi
    falls outside the profile's range; nothing is ever clamped.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    z_grid = np.asarray(z_grid, dtype=float)
    if r_grid.ndim != 1 or z_grid.ndim != 1 or r_grid.size < 1 or z_grid.size < 1:
        raise DomainError("r and z grids must be non-empty 1-d arrays")
    if np.any(r_grid <= 0.0):
        raise DomainError("r grid must be strictly positive (r = 0 is the vortex line)")
    if np.any(np.diff(r_grid) <= 0) or np.any(np.diff(z_grid) <= 0):
        raise DomainError("r and z grids must be strictly increasing")

    xi = z_grid[None, :] / r_grid[:, None]
    lo, hi = profile.grid[0], profile.grid[-1]
    bad = (xi < lo) | (xi > hi)
    if np.any(bad):
        ii, jj = np.nonzero(bad)
        pairs = [(float(r_grid[i]), float(z_grid[j])) for i, j in zip(ii, jj)]
        shown = ", ".join(f"(r={r:g}, z={z:g})" for r, z in pairs[:5])
        more = f" and {len(pairs) - 5} more" if len(pairs) > 5 else ""
        raise OutOfDomainError(
            f"{len(pairs)} grid points map outside xi-range [{lo:g}, {hi:g}]: "
            f"{shown}{more}",
            offending=pairs,
        )

    grid = profile.grid
    interp_u = PchipInterpolator(grid, profile.u)
    interp_v = PchipInterpolator(grid, profile.v)
    interp_w = PchipInterpolator(grid, profile.w)
    interp_p = PchipInterpolator(grid, profile.p)

    inv_r = 1.0 / r_grid[:, None]
    return PhysicalField(
        r_grid=r_grid,
        z_grid=z_grid,
        u=interp_u(xi) * inv_r,
        v=interp_v(xi) * inv_r,
        w=interp_w(xi) * inv_r,
        p=interp_p(xi) * inv_r**2,
    )


def export_csv(field: PhysicalField, path) -> None:
    """Write ``r,z,u,v,w,p`` rows (r outer, z fastest) at full precision."""
    lines = ["r,z,u,v,w,p"]
    for i, r in enumerate(field.r_grid):
        for j, z in enumerate(field.z_grid):
            lines.append(
                f"{r:.17g},{z:.17g},{field.u[i, j]:.17g},{field.v[i, j]:.17g},"
                f"{field.w[i, j]:.17g},{field.p[i, j]:.17g}"
            )
    atomic_write_text(path, "\n".join(lines) + "\n")


def export_vtk(field: PhysicalField, path, title="swirlsolve field") -> None:
    """Write a legacy ASCII VTK structured grid of the meridional plane.

    Points are (r, 0, z) with dimensions (len(r), 1, len(z)) in VTK's
    x-fastest point order; the point-data vector holds (u, v, w) so the
    meridional components span the x-z plane and the swirl points out of
    it, and pressure follows as a scalar field.
    """
    nr, nz = field.r_grid.size, field.z_grid.size
    npts = nr * nz
    out = [
        "# vtk DataFile Version 3.0",
        title,
        "ASCII",
        "DATASET STRUCTURED_GRID",
        f"DIMENSIONS {nr} 1 {nz}",
        f"POINTS {npts} double",
    ]
    # VTK point order: x (r) varies fastest, then y, then z
    for j in range(nz):
        for i in range(nr):
            out.append(f"{field.r_grid[i]:.17g} 0 {field.z_grid[j]:.17g}")
    out.append(f"POINT_DATA {npts}")
    out.append("VECTORS velocity double")
    for j in range(nz):
        for i in range(nr):
            out.append(
                f"{field.u[i, j]:.17g} {field.v[i, j]:.17g} {field.w[i, j]:.17g}"
            )
    out.append("SCALARS pressure double 1")
    out.append("LOOKUP_TABLE default")
    for j in range(nz):
        for i in range(nr):
            out.append(f"{field.p[i, j]:.17g}")
    atomic_write_text(path, "\n".join(out) + "\n")

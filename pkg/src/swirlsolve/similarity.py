"""Similarity coordinate system, shape function, and profile data model.

The single independent variable is xi = z/r.  Velocity profiles are carried
by theta (the stream-function combination W - xi*U), the swirl V, and the
pressure P; the kinematic relations U = -theta' and W = theta - xi*theta'
recover the meridional components.  The compact coordinate
x = xi/sqrt(1+xi^2) maps [0, inf) onto [0, 1) and is the solver-side
coordinate everywhere in this package.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError

__all__ = [
    "FlowParameters",
    "SimilarityProfile",
    "SerrinProfile",
    "phi",
    "phi_prime",
    "xi_to_x",
    "x_to_xi",
    "velocities_from_theta",
    "serrin_transform",
    "load_profile",
    "save_profile",
    "profile_to_dict",
    "profile_from_dict",
]


def phi(xi):
    """Shape function xi*sqrt(1+xi^2) - xi^2.

    Vanishes at 0, strictly increasing, tends to 1/2 as xi -> +inf.  For
    xi > 0 the subtraction cancels catastrophically near the limit, so the
    algebraic rewrite xi/(sqrt(1+xi^2)+xi) is used there; for xi <= 0 both
    terms share a sign and the direct product form is stable.
    """
    xi = np.asarray(xi, dtype=float)
    root = np.hypot(1.0, xi)
    out = np.where(xi > 0.0, xi / (root + xi), xi * (root - xi))
    return out if out.ndim else float(out)


def phi_prime(xi):
    """Derivative of :func:`phi`: (1+2*xi^2)/sqrt(1+xi^2) - 2*xi.

    Computed through the equivalent form (sqrt(1+xi^2)-xi)^2/sqrt(1+xi^2),
    which is positive by construction and avoids cancellation for large
    positive xi (where it becomes 1/((sqrt(1+xi^2)+xi)^2*sqrt(1+xi^2))).
    """
    xi = np.asarray(xi, dtype=float)
    root = np.hypot(1.0, xi)
    out = np.where(
        xi > 0.0,
        1.0 / ((root + xi) ** 2 * root),
        (root - xi) ** 2 / root,
    )
    return out if out.ndim else float(out)


def xi_to_x(xi):
    """Compactify: x = xi/sqrt(1+xi^2), mapping R onto (-1, 1)."""
    xi = np.asarray(xi, dtype=float)
    out = xi / np.hypot(1.0, xi)
    return out if out.ndim else float(out)


def x_to_xi(x):
    """Inverse compactification xi = x/sqrt(1-x^2); requires |x| < 1."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1.0):
        raise DomainError("compact coordinate must satisfy |x| < 1")
    out = x / np.sqrt((1.0 - x) * (1.0 + x))
    return out if out.ndim else float(out)


def velocities_from_theta(theta, theta_prime, xi):
    """Meridional similarity velocities (U, W) = (-theta', theta - xi*theta')."""
    theta = np.asarray(theta, dtype=float)
    theta_prime = np.asarray(theta_prime, dtype=float)
    xi = np.asarray(xi, dtype=float)
    u = -theta_prime
    w = theta - xi * theta_prime
    if u.ndim == 0:
        return float(u), float(w)
    return u, w


@dataclass(frozen=True)
class FlowParameters:
    """Physical parameters of a similarity flow.

    nu      -- kinematic viscosity (>= 0; 0 selects the inviscid family)
    v_swirl -- far-field swirl for viscous runs, boundary swirl for inviscid
    e0      -- pressure parameter, the P-value at the inflow boundary
    xi0     -- lower domain endpoint (0 for the half space above the plane)
    branch  -- sign of theta when recovered from theta^2 (+1 or -1)
    """

    nu: float
    v_swirl: float
    e0: float
    xi0: float = 0.0
    branch: int = 1

    def __post_init__(self):
        if not np.isfinite([self.nu, self.v_swirl, self.e0, self.xi0]).all():
            raise DomainError("flow parameters must be finite")
        if self.nu < 0:
            raise DomainError(f"kinematic viscosity must be >= 0, got {self.nu}")
        if self.branch not in (1, -1):
            raise DomainError(f"branch must be +1 or -1, got {self.branch}")

    @property
    def k0_half_space(self):
        """Pressure-swirl constant e0 + v_swirl^2/2 of the half-space family."""
        return self.e0 + 0.5 * self.v_swirl**2

    def to_dict(self):
        return {
            "nu": self.nu,
            "v_swirl": self.v_swirl,
            "e0": self.e0,
            "xi0": self.xi0,
            "branch": self.branch,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            nu=float(d["nu"]),
            v_swirl=float(d["v_swirl"]),
            e0=float(d["e0"]),
            xi0=float(d["xi0"]),
            branch=int(d["branch"]),
        )


def _readonly(a):
    arr = np.array(a, dtype=float)
    if arr.ndim != 1:
        raise DomainError("profile arrays must be one-dimensional")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SimilarityProfile:
    """Sampled similarity solution on a strictly increasing xi grid.

    Stores (theta, theta', V, P); the meridional velocities are derived on
    demand so they can never disagree with the stored stream variable.
    Instances are immutable and safe to share across threads or processes.
    """

    grid: np.ndarray
    theta: np.ndarray
    theta_prime: np.ndarray
    v: np.ndarray
    p: np.ndarray
    params: FlowParameters
    convergence: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("grid", "theta", "theta_prime", "v", "p"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))
        n = self.grid.size
        if n < 2:
            raise DomainError("profile needs at least two grid points")
        for name in ("theta", "theta_prime", "v", "p"):
            if getattr(self, name).size != n:
                raise DomainError(f"profile array '{name}' length differs from grid")
        if not np.all(np.diff(self.grid) > 0):
            raise DomainError("profile grid must be strictly increasing")
        if not all(
            np.isfinite(getattr(self, k)).all()
            for k in ("grid", "theta", "theta_prime", "v", "p")
        ):
            raise DomainError("profile samples must be finite")

    def __len__(self):
        return self.grid.size

    @property
    def u(self):
        """Radial similarity velocity U = -theta' on the grid."""
        return -self.theta_prime

    @property
    def w(self):
        """Axial similarity velocity W = theta - xi*theta' on the grid."""
        return self.theta - self.grid * self.theta_prime


@dataclass(frozen=True)
class SerrinProfile:
    """Profile in the compact coordinate: (x, theta_bar, v_bar)."""

    x: np.ndarray
    theta_bar: np.ndarray
    v_bar: np.ndarray


def serrin_transform(profile: SimilarityProfile) -> SerrinProfile:
    """Map a profile to compact-coordinate variables.

    x = xi/sqrt(1+xi^2), theta_bar(x) = -sqrt(1+xi^2)*theta(xi), and the
    swirl carries over unchanged.  Under this map the shape function becomes
    phi(xi(x)) = x/(1+x).
    """
    xi = profile.grid
    root = np.hypot(1.0, xi)
    return SerrinProfile(
        x=xi_to_x(xi),
        theta_bar=-root * profile.theta,
        v_bar=profile.v.copy(),
    )


# ---------------------------------------------------------------------------
# JSON interchange


def profile_to_dict(profile: SimilarityProfile) -> dict:
    doc = {
        "params": profile.params.to_dict(),
        "grid": profile.grid.tolist(),
        "theta": profile.theta.tolist(),
        "theta_prime": profile.theta_prime.tolist(),
        "v": profile.v.tolist(),
        "p": profile.p.tolist(),
    }
    if profile.convergence is not None:
        doc["convergence"] = profile.convergence
    return doc


def profile_from_dict(doc: dict) -> SimilarityProfile:
    try:
        return SimilarityProfile(
            grid=doc["grid"],
            theta=doc["theta"],
            theta_prime=doc["theta_prime"],
            v=doc["v"],
            p=doc["p"],
            params=FlowParameters.from_dict(doc["params"]),
            convergence=doc.get("convergence"),
        )
    except KeyError as exc:
        raise DomainError(f"profile document is missing field {exc}") from exc


def save_profile(profile: SimilarityProfile, path) -> None:
    """Write a profile JSON document atomically (temp file + rename)."""
    atomic_write_text(path, json.dumps(profile_to_dict(profile), indent=2) + "\n")


def load_profile(path) -> SimilarityProfile:
    with open(path, encoding="utf-8") as fh:
        return profile_from_dict(json.load(fh))


def atomic_write_text(path, text) -> None:
    """Write text to ``path`` via a temp file so failures leave no partials."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

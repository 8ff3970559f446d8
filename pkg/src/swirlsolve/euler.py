"""Inviscid solution families and slip-discontinuity certification.

The zero-viscosity similarity system admits closed-form solutions with
constant swirl: theta^2 is proportional to the shape function phi on the
half space, and to phi(xi) - phi(xi0) on conical domains.  Candidate
solutions with a single interior slip discontinuity are fixed by two
amplitude constants (k_minus, k_plus); Rankine-Hugoniot matching forces an
amplitude ratio whose sign always clashes with the sign that
non-negativity of theta^2 forces on the inner piece.  The scan in
:func:`certify_nonexistence` verifies that clash numerically on a sigma
grid, certifying that no admissible discontinuity location exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from ._numerics import adaptive_simpson, richardson_derivative
from .errors import DomainError
from .similarity import FlowParameters, SimilarityProfile, phi, phi_prime

__all__ = [
    "PiecewiseEulerSolution",
    "OneSidedState",
    "JumpBrackets",
    "JumpReport",
    "CertificationReport",
    "euler_continuous",
    "euler_conical",
    "default_grid",
    "piecewise_ansatz",
    "jump_brackets",
    "jump_ratio_half_space",
    "jump_ratio_conical",
    "sign_function_j",
    "sign_function_j_conical",
    "sign_function_f",
    "certify_nonexistence",
    "inviscid_residuals",
    "integrated_momentum_defect",
]

DEFAULT_XI_MIN = 1e-4


def default_grid(xi0=0.0, offset=DEFAULT_XI_MIN, xi_max=1e3, n=1500):
    """Geometric grid on (xi0, xi0 + xi_max], clear of the boundary point.

    The closed-form theta has a square-root profile at the lower endpoint,
    so theta' diverges there; grids must start strictly above xi0.
    """
    if offset <= 0:
        raise DomainError("grid offset above xi0 must be positive")
    return xi0 + np.geomspace(offset, xi_max, n)


def _conical_k0(params: FlowParameters) -> float:
    denom = 1.0 - 2.0 * phi(params.xi0)
    if denom == 0.0:
        raise DomainError("1 - 2*phi(xi0) vanished; xi0 is out of range")
    return (0.5 * params.v_swirl**2 + params.e0) / denom


def _boundary_pressure(params: FlowParameters) -> float:
    xi0 = params.xi0
    return params.e0 + (0.5 * params.v_swirl**2 + params.e0) * xi0 / np.hypot(1.0, xi0)


def euler_conical(params: FlowParameters, grid) -> SimilarityProfile:
    """Closed-form constant-swirl solution on the conical domain xi >= xi0.

    theta^2 = 2*k0*(phi(xi) - phi(xi0)) with
    k0 = (v_swirl^2/2 + e0)/(1 - 2*phi(xi0)), V identically v_swirl, and P
    recovered by quadrature of the meridional momentum balance
    [theta^2/2 + (1+xi^2)P]' = -xi V^2 from the boundary value at xi0.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise DomainError("grid must be a 1-d array with at least 2 points")
    if grid[0] <= params.xi0:
        raise DomainError(
            f"grid must start strictly above xi0={params.xi0:g} "
            "(theta' is singular at the boundary)"
        )
    k0 = _conical_k0(params)
    if k0 <= 0:
        raise DomainError(
            "k0 = (v_swirl^2/2 + e0)/(1 - 2*phi(xi0)) must be positive for the "
            f"constant-swirl family; got k0={k0:g}"
        )
    xi0 = params.xi0
    b = float(params.branch)
    theta_sq = 2.0 * k0 * (phi(grid) - phi(xi0))
    theta = b * np.sqrt(theta_sq)
    theta_prime = k0 * phi_prime(grid) / theta

    v0 = params.v_swirl
    p0 = _boundary_pressure(params)
    # cumulative integral of s*V^2 from xi0, interval by interval
    swirl_sink = np.empty_like(grid)
    integrand = lambda s: s * v0 * v0
    swirl_sink[0] = adaptive_simpson(integrand, xi0, grid[0])
    for j in range(1, grid.size):
        swirl_sink[j] = swirl_sink[j - 1] + adaptive_simpson(
            integrand, grid[j - 1], grid[j]
        )
    p = ((1.0 + xi0**2) * p0 - 0.5 * theta_sq - swirl_sink) / (1.0 + grid**2)

    return SimilarityProfile(
        grid=grid,
        theta=theta,
        theta_prime=theta_prime,
        v=np.full_like(grid, v0),
        p=p,
        params=params,
    )


def euler_continuous(params: FlowParameters, grid) -> SimilarityProfile:
    """Half-space specialization: theta^2 = 2*k0*phi with k0 = e0 + v_swirl^2/2."""
    if params.xi0 != 0.0:
        raise DomainError("half-space family requires xi0 = 0; use euler_conical")
    if params.k0_half_space <= 0:
        raise DomainError(
            "k0 = e0 + v_swirl^2/2 must be positive for the half-space family; "
            f"got k0={params.k0_half_space:g}"
        )
    return euler_conical(params, grid)


# ---------------------------------------------------------------------------
# Piecewise candidate with a single slip discontinuity


@dataclass(frozen=True)
class PiecewiseEulerSolution:
    """Two-piece constant-swirl candidate with theta(sigma) = 0.

    Inner piece on (xi0, sigma):  theta^2/2 = k_minus * J(xi)
    Outer piece on (sigma, inf):  theta^2/2 = k_plus * (phi(xi) - phi(sigma))
    where J is the inner shape function returned by the sign functions
    below.  The swirl is piecewise constant (v_minus inside, v_plus
    outside).
    """

    sigma: float
    k_minus: float
    k_plus: float
    v_minus: float
    v_plus: float
    xi0: float = 0.0

    def __post_init__(self):
        if self.sigma <= self.xi0:
            raise DomainError(
                f"sigma={self.sigma:g} must lie strictly above xi0={self.xi0:g}"
            )
        if self.xi0**2 == self.sigma**2:
            raise DomainError("xi0^2 == sigma^2 makes the inner coefficient singular")

    @property
    def _inner_coef(self):
        return (phi(self.xi0) - phi(self.sigma)) / (self.xi0**2 - self.sigma**2)

    def theta_sq(self, xi):
        """Pointwise theta^2 of the candidate (may be negative off-ansatz)."""
        xi = np.asarray(xi, dtype=float)
        inner = 2.0 * self.k_minus * (
            phi(xi) - phi(self.sigma) - self._inner_coef * (xi**2 - self.sigma**2)
        )
        outer = 2.0 * self.k_plus * (phi(xi) - phi(self.sigma))
        out = np.where(xi < self.sigma, inner, outer)
        return out if out.ndim else float(out)

    def v(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.where(xi < self.sigma, self.v_minus, self.v_plus)
        return out if out.ndim else float(out)

    def theta_theta_prime(self, xi):
        """The product theta*theta', finite across sigma where theta' is not."""
        xi = np.asarray(xi, dtype=float)
        inner = self.k_minus * (phi_prime(xi) - 2.0 * self._inner_coef * xi)
        outer = self.k_plus * phi_prime(xi)
        out = np.where(xi < self.sigma, inner, outer)
        return out if out.ndim else float(out)


def piecewise_ansatz(sigma, k_minus, k_plus, v_minus, v_plus, xi0=0.0):
    """Construct the two-piece slip-discontinuity candidate."""
    return PiecewiseEulerSolution(
        sigma=float(sigma),
        k_minus=float(k_minus),
        k_plus=float(k_plus),
        v_minus=float(v_minus),
        v_plus=float(v_plus),
        xi0=float(xi0),
    )


# ---------------------------------------------------------------------------
# Jump conditions


class OneSidedState(NamedTuple):
    """One-sided limits (theta, theta', V, P) at a candidate location."""

    theta: float
    theta_prime: float
    v: float
    p: float


class JumpBrackets(NamedTuple):
    """The four Rankine-Hugoniot jump values at sigma.

    p            -- [P]
    theta_v      -- [theta*V]
    theta_momentum -- [theta^2 - xi*theta*theta']
    theta        -- [theta]
    """

    p: float
    theta_v: float
    theta_momentum: float
    theta: float


def jump_brackets(left: OneSidedState, right: OneSidedState, sigma) -> JumpBrackets:
    """Evaluate the four jump brackets from supplied one-sided states."""
    sigma = float(sigma)
    flux = lambda s: s.theta**2 - sigma * s.theta * s.theta_prime
    return JumpBrackets(
        p=right.p - left.p,
        theta_v=right.theta * right.v - left.theta * left.v,
        theta_momentum=flux(right) - flux(left),
        theta=right.theta - left.theta,
    )


def jump_ratio_half_space(sigma):
    """Amplitude ratio k_plus/k_minus forced by matching at sigma > 0.

    Returns ``(ratio, negative)`` where the flag records the sign; the ratio
    equals 1 - 2*phi(sigma)/(sigma*phi'(sigma)) and is negative for every
    sigma > 0.
    """
    sigma = float(sigma)
    if sigma <= 0:
        raise DomainError("half-space discontinuity location must be positive")
    ratio = 1.0 - 2.0 * phi(sigma) / (sigma * phi_prime(sigma))
    return ratio, ratio < 0


def jump_ratio_conical(sigma, xi0):
    """Amplitude ratio on a conical domain; reduces to the half-space form at xi0=0."""
    sigma = float(sigma)
    xi0 = float(xi0)
    if sigma <= xi0:
        raise DomainError(f"sigma={sigma:g} must lie strictly above xi0={xi0:g}")
    if xi0 == 0.0:
        return jump_ratio_half_space(sigma)[0]
    if xi0**2 == sigma**2:
        raise DomainError("xi0^2 == sigma^2 makes the matching relation singular")
    coef = (phi(xi0) - phi(sigma)) / (xi0**2 - sigma**2)
    return 1.0 - 2.0 * coef * sigma / phi_prime(sigma)


# ---------------------------------------------------------------------------
# Sign functions of the inner piece


def sign_function_j(xi, sigma):
    """Inner shape function on the half space; vanishes at 0 and sigma."""
    xi = np.asarray(xi, dtype=float)
    sigma = float(sigma)
    out = phi(xi) - phi(sigma) - phi(sigma) / sigma**2 * (xi**2 - sigma**2)
    return out if out.ndim else float(out)


def sign_function_j_conical(xi, sigma, xi0):
    """Inner shape function on a cone; vanishes at xi0 and sigma."""
    xi = np.asarray(xi, dtype=float)
    sigma = float(sigma)
    xi0 = float(xi0)
    if xi0 == 0.0:
        return sign_function_j(xi, sigma)
    if xi0**2 == sigma**2:
        raise DomainError("xi0^2 == sigma^2 makes the inner coefficient singular")
    coef = (phi(xi0) - phi(sigma)) / (xi0**2 - sigma**2)
    out = phi(xi) - phi(sigma) - coef * (xi**2 - sigma**2)
    return out if out.ndim else float(out)


def sign_function_f(xi, sigma):
    """Secant slope (phi(xi) - phi(sigma))/(xi^2 - sigma^2).

    At |xi| = sigma the removable singularity is filled with the limit
    phi'(sigma)/(2*sigma).
    """
    xi = np.asarray(xi, dtype=float)
    sigma = float(sigma)
    denom = xi**2 - sigma**2
    limit = phi_prime(sigma) / (2.0 * sigma)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(denom == 0.0, limit, (phi(xi) - phi(sigma)) / denom)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Certification scan


@dataclass(frozen=True)
class JumpReport:
    """Verdict for one candidate discontinuity location."""

    sigma: float
    brackets: JumpBrackets
    ratio_required: float
    sign_k_minus_forced: int  # +1, -1, or 0 when sampling was inconclusive
    admissible: bool
    contradiction_type: str

    def to_record(self):
        ratio = self.ratio_required
        return {
            "sigma": self.sigma,
            "ratio": ratio,
            "ratio_sign": int(np.sign(ratio)),
            "k_minus_forced_sign": self.sign_k_minus_forced,
            "verdict": "admissible"
            if self.admissible
            else ("inconclusive" if self.sign_k_minus_forced == 0 else "contradiction"),
            "contradiction_type": self.contradiction_type,
        }


@dataclass(frozen=True)
class CertificationReport:
    """Scan outcome over a sigma grid."""

    domain: str
    xi0: float
    reports: tuple
    n_samples: int

    @property
    def n_tested(self):
        return len(self.reports)

    @property
    def n_admissible(self):
        return sum(1 for r in self.reports if r.admissible)

    @property
    def n_inconclusive(self):
        return sum(1 for r in self.reports if r.sign_k_minus_forced == 0)

    def contradiction_types(self):
        return sorted({r.contradiction_type for r in self.reports if r.contradiction_type})

    def to_dict(self):
        return {
            "domain": self.domain,
            "xi0": self.xi0,
            "n_samples_per_sigma": self.n_samples,
            "records": [r.to_record() for r in self.reports],
            "summary": {
                "n_tested": self.n_tested,
                "n_admissible": self.n_admissible,
                "n_inconclusive": self.n_inconclusive,
            },
        }


def _forced_inner_sign(sigma, xi0, n_samples):
    """Sign of k_minus forced by theta^2 >= 0 on the inner piece.

    Samples the inner shape function at strictly interior points; a uniform
    sign forces sign(k_minus), anything mixed (or an exact zero) is
    inconclusive and returns 0.
    """
    pts = xi0 + (sigma - xi0) * np.arange(1, n_samples + 1) / (n_samples + 1.0)
    vals = sign_function_j_conical(pts, sigma, xi0)
    if np.all(vals > 0.0):
        return 1
    if np.all(vals < 0.0):
        return -1
    return 0


def _outer_amplitude_positive(sigma, probes=(1.5, 4.0, 16.0)):
    """theta^2 >= 0 outside needs phi(xi) > phi(sigma) for xi > sigma."""
    xi = sigma + np.asarray(probes) * (1.0 + abs(sigma))
    return bool(np.all(phi(xi) - phi(sigma) > 0.0))


def certify_nonexistence(domain, sigma_grid, xi0=0.0, n_samples=512) -> CertificationReport:
    """Scan candidate discontinuity locations and certify none is admissible.

    For each sigma the scan computes (a) the amplitude ratio k_plus/k_minus
    demanded by the jump conditions, (b) the sign of k_minus forced by
    non-negativity of theta^2 on the inner piece, and (c) confirms k_plus
    must be positive because phi increases beyond sigma.  A location is
    admissible only if (a)-(c) are jointly satisfiable; the report records
    the contradiction pattern otherwise, and flags sigma values where the
    sign sampling was inconclusive instead of guessing.
    """
    if domain not in ("half-space", "conical"):
        raise DomainError(f"unknown domain {domain!r}")
    if domain == "half-space":
        xi0 = 0.0
    sigma_grid = np.sort(np.asarray(sigma_grid, dtype=float))
    if sigma_grid.size == 0:
        raise DomainError("sigma grid is empty")
    if np.any(sigma_grid <= xi0):
        raise DomainError("all sigma must lie strictly above xi0")
    if np.any(sigma_grid**2 == xi0**2):
        raise DomainError("sigma grid hits |xi0|, where the matching relation is singular")

    reports = []
    for sigma in sigma_grid:
        ratio = jump_ratio_conical(sigma, xi0)
        forced = _forced_inner_sign(sigma, xi0, n_samples)
        if not _outer_amplitude_positive(sigma):
            forced = 0  # probe could not confirm k_plus > 0: report inconclusive

        if forced == 0:
            admissible = False
            ctype = ""
        elif ratio == 0.0:
            admissible = False  # k_plus would vanish, but theta^2 > 0 outside needs k_plus > 0
            ctype = "zero_ratio"
        else:
            # k_plus > 0 and ratio = k_plus/k_minus force sign(k_minus) = sign(ratio)
            admissible = int(np.sign(ratio)) == forced
            ctype = (
                ""
                if admissible
                else ("neg_ratio_pos_k_minus" if ratio < 0 else "pos_ratio_neg_k_minus")
            )

        reports.append(
            JumpReport(
                sigma=float(sigma),
                brackets=_candidate_brackets(sigma, xi0, ratio),
                ratio_required=float(ratio),
                sign_k_minus_forced=forced,
                admissible=admissible,
                contradiction_type=ctype,
            )
        )
    return CertificationReport(
        domain=domain, xi0=float(xi0), reports=tuple(reports), n_samples=n_samples
    )


def _candidate_brackets(sigma, xi0, ratio):
    """Brackets of the matched candidate, normalized to k_minus = 1.

    theta vanishes from both sides, [P] and [theta*V] vanish with it, and
    the momentum bracket reduces to -sigma times the jump of the finite
    product theta*theta' between the two pieces.  At the demanded amplitude
    ratio that jump closes to rounding, which the report records.
    """
    if xi0 == 0.0:
        inner_slope = phi_prime(sigma) - 2.0 * phi(sigma) / sigma
    else:
        coef = (phi(xi0) - phi(sigma)) / (xi0**2 - sigma**2)
        inner_slope = phi_prime(sigma) - 2.0 * coef * sigma
    outer_slope = ratio * phi_prime(sigma)
    return JumpBrackets(
        p=0.0,
        theta_v=0.0,
        theta_momentum=-sigma * (outer_slope - inner_slope),
        theta=0.0,
    )


# ---------------------------------------------------------------------------
# Residual evaluation for the inviscid system


def inviscid_residuals(theta: Callable, v: Callable, p: Callable, xi_points, xi_lower=None):
    """Pointwise residuals of the three inviscid balance laws.

    theta, v, p are scalar callables of xi (closed forms or interpolants).
    Derivatives are Richardson-extrapolated central differences, so the
    check is independent of how the profile was constructed.  Returns
    ``(res_momentum, res_swirl, res_axial)`` arrays for

        [theta^2/2 + (1+xi^2) P]' + xi V^2
        V' theta
        [theta^2 - xi*(theta^2/2)' + P]'

    ``xi_lower`` (the domain boundary, when given) caps stencil widths so
    no evaluation steps below it; points must stay strictly above it.
    """
    xi_points = np.atleast_1d(np.asarray(xi_points, dtype=float))

    def h_cap(s):
        if xi_lower is None:
            return None
        gap = 0.2 * (s - xi_lower)
        if gap <= 0:
            raise DomainError("residual points must lie strictly above xi_lower")
        return gap

    half_theta_sq = lambda s: 0.5 * theta(s) ** 2
    momentum = lambda s: half_theta_sq(s) + (1.0 + s * s) * p(s)
    axial = lambda s: (
        theta(s) ** 2
        - s * richardson_derivative(half_theta_sq, s, h_max=h_cap(s))
        + p(s)
    )

    res_m = np.empty_like(xi_points)
    res_s = np.empty_like(xi_points)
    res_a = np.empty_like(xi_points)
    for i, s in enumerate(xi_points):
        cap = h_cap(s)
        # the outer stencil widens the inner one's reach; halve it again
        cap_outer = None if cap is None else 0.5 * cap
        res_m[i] = richardson_derivative(momentum, s, h_max=cap) + s * v(s) ** 2
        res_s[i] = richardson_derivative(v, s, h_max=cap) * theta(s)
        res_a[i] = richardson_derivative(axial, s, h_max=cap_outer)
    return res_m, res_s, res_a


def integrated_momentum_defect(theta, v, p, a, b, tol=1e-12):
    """Weak-form defect of the meridional momentum balance over [a, b].

    [theta^2/2 + (1+xi^2)P] evaluated between the endpoints must equal
    minus the adaptive-quadrature integral of xi*V^2; returns the
    difference.  Nonzero values flag a pressure inconsistent with the
    balance law.
    """
    bracket = lambda s: 0.5 * theta(s) ** 2 + (1.0 + s * s) * p(s)
    integral = adaptive_simpson(lambda s: s * v(s) ** 2, a, b, tol=tol)
    return bracket(b) - bracket(a) + integral

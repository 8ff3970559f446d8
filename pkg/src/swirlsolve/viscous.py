"""Coupled viscous similarity solver.

The reduced system couples a first-order Riccati-type balance for theta,

    theta^2/2 - nu*[(1+xi^2)*theta' + xi*theta] = G(xi) + e0*phi(xi),

to a second-order swirl transport equation,

    nu*V'' + (3*nu*xi - theta)/(1+xi^2) * V' = 0,

through the nested swirl integral G.  The solve alternates a quadrature
pass for V given theta with an adaptive integration for theta given V
(damped fixed-point iteration) in the compact coordinate x, where the
theta balance reads nu*theta_bar'(x) = (G + e0*phi)/(1-x^2) - theta_bar^2/2
with theta_bar = -sqrt(1+xi^2)*theta and phi = x/(1+x).

The working grid is uniform in s = -log(1-x).  That clusters points at the
truncation end, where theta_bar grows logarithmically, keeping
finite-difference residual checks accurate over the whole grid.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np
from scipy.integrate import RK45

from ._numerics import cumulative_integral, derivative_uniform, spline_antiderivative
from .errors import (
    BlowUpError,
    DomainError,
    MaxIterationsError,
    QuadratureOverflowError,
    StepBudgetError,
)
from .similarity import FlowParameters, SimilarityProfile, phi, xi_to_x

__all__ = [
    "SolverConfig",
    "RegimeLabel",
    "SolverGrid",
    "SwirlForcing",
    "compute_G",
    "solve_V_given_theta",
    "solve_theta_given_V",
    "picard_solve",
    "viscous_residuals",
    "classify_regime",
    "parameter_sweep",
    "sweep_to_csv",
    "SWEEP_CSV_HEADER",
]

log = logging.getLogger("swirlsolve.viscous")


@dataclass(frozen=True)
class SolverConfig:
    """Numerical knobs for the coupled solve."""

    x_max: float = 0.999
    n_grid: int = 2048
    picard_tol: float = 1e-10
    max_iters: int = 200
    damping: float = 0.5
    ode_tol: float = 1e-10
    blowup_bound: float = 1e8
    max_steps: int = 50_000

    def __post_init__(self):
        if not 0.0 < self.x_max < 1.0:
            raise DomainError("x_max must lie in (0, 1)")
        if self.n_grid < 8:
            raise DomainError("n_grid must be at least 8")
        if min(self.picard_tol, self.ode_tol) <= 0:
            raise DomainError("tolerances must be positive")
        if not 0.0 < self.damping <= 1.0:
            raise DomainError("damping must lie in (0, 1]")
        if self.max_iters < 1 or self.max_steps < 100:
            raise DomainError("iteration and step caps are too small")


class RegimeLabel(Enum):
    """Meridional circulation pattern of a converged profile."""

    OUTWARD_DOWNWARD = "OutwardDownward"
    INWARD_UPWARD = "InwardUpward"
    INWARD_DOWNWARD = "InwardDownward"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class SolverGrid:
    """Compact-coordinate grid, uniform in s = -log(1-x).

    Carries the matched (s, x, xi) samples; dx/ds = 1-x converts integrals
    between the two coordinates exactly.
    """

    s: np.ndarray
    x: np.ndarray
    xi: np.ndarray

    @classmethod
    def build(cls, x_max, n):
        s = np.linspace(0.0, -np.log1p(-x_max), n)
        x = -np.expm1(-s)
        x[-1] = x_max
        xi = x / np.sqrt((1.0 - x) * (1.0 + x))
        return cls(s=s, x=x, xi=xi)

    @classmethod
    def from_xi(cls, xi):
        """Recover the grid triple from stored xi samples."""
        xi = np.asarray(xi, dtype=float)
        if xi.ndim != 1 or xi.size < 2 or not np.all(np.diff(xi) > 0):
            raise DomainError("xi grid must be 1-d and strictly increasing")
        if xi[0] < 0:
            raise DomainError("viscous grids start at xi = 0")
        x = xi_to_x(xi)
        s = -np.log1p(-x)
        return cls(s=s, x=x, xi=xi)

    @property
    def dxds(self):
        return 1.0 - self.x

    def __len__(self):
        return self.s.size


class SwirlForcing:
    """Evaluator of the nested swirl integral G from sampled V.

    G(xi) = xi*sqrt(1+xi^2) * int_xi^inf [ inner(zeta) / (zeta^2*(1+zeta^2)^(3/2)) ] dzeta,
    inner(zeta) = int_0^zeta s*V(s)^2 ds.

    The inner integral is split into the exact constant-swirl part
    v_inf^2*zeta^2/2 plus a residue quadrature of s*(V^2 - v_inf^2); in the
    compact coordinate the outer integrand becomes inner/zeta^2, which is
    bounded, and the tail beyond the grid is integrated in closed form
    under the constant-v_inf extension.  For exactly constant V the split
    reproduces (V^2/2)*phi to rounding, which is the module's primary
    quadrature oracle.
    """

    def __init__(self, grid: SolverGrid, v, v_inf=None):
        v = np.asarray(v, dtype=float)
        if v.shape != grid.x.shape:
            raise DomainError("V samples must match the grid")
        if not np.isfinite(v).all():
            raise DomainError("V samples must be finite")
        if v_inf is None:
            v_inf = float(v[-1])
        self.grid = grid
        self.v_inf = float(v_inf)

        x, s = grid.x, grid.s
        # residue of the inner integral, integrated in s: ds-measure = dx/(1-x)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = x * (v**2 - self.v_inf**2) / (1.0 - x**2) ** 2 * grid.dxds
        w[0] = 0.0
        self.inner_residue = cumulative_integral(s, w)

        # outer integrand inner/zeta^2 = v_inf^2/2 + residue*(1-x^2)/x^2
        with np.errstate(divide="ignore", invalid="ignore"):
            q = self.v_inf**2 / 2.0 + self.inner_residue * (1.0 - x**2) / x**2
        q[0] = v[0] ** 2 / 2.0  # removable 0/0 at the axis endpoint
        self._outer_anti = spline_antiderivative(s, q * grid.dxds)
        self._outer_end = float(self._outer_anti(s[-1]))

        x_max = x[-1]
        residue_end = self.inner_residue[-1]
        self._tail = self.v_inf**2 / 2.0 * (1.0 - x_max) + residue_end * (
            1.0 / x_max + x_max - 2.0
        )

    def inner_integral(self, j=None):
        """inner(zeta_j) = v_inf^2*zeta_j^2/2 + residue_j on the grid."""
        xi = self.grid.xi
        base = self.v_inf**2 * xi**2 / 2.0
        vals = base + self.inner_residue
        return vals if j is None else vals[j]

    def at_x(self, xq):
        """G evaluated at arbitrary compact coordinates in [0, x_max]."""
        xq = np.asarray(xq, dtype=float)
        sq = -np.log1p(-xq)
        outer = self._outer_end - self._outer_anti(sq) + self._tail
        out = xq / (1.0 - xq**2) * outer
        return out if out.ndim else float(out)

    def on_grid(self):
        return self.at_x(self.grid.x)


def compute_G(xi_grid, v, xi, v_inf=None):
    """Nested swirl integral G at ``xi`` from V sampled on ``xi_grid``.

    The grid must cover [0, xi]; beyond its last point V is extended by
    ``v_inf`` (defaulting to the last sample).
    """
    grid = SolverGrid.from_xi(xi_grid)
    forcing = SwirlForcing(grid, v, v_inf)
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0) or np.any(xi > grid.xi[-1]):
        raise DomainError("xi must lie inside the sampled grid range")
    return forcing.at_x(xi_to_x(xi))


def solve_V_given_theta(xi_grid, theta, nu, v_inf, v0=0.0):
    """Swirl profile from theta by double quadrature.

    V'(xi) = C*exp(int_0^xi (theta - 3*nu*s)/(nu*(1+s^2)) ds) integrates, in
    the compact coordinate, to V(x) = v0 + C*int_0^x exp(-S(t)/nu) dt with
    S the running integral of theta_bar.  C is normalized so the value at
    the truncated far field equals ``v_inf`` exactly; V(0) = v0 exactly
    (no-slip default 0).
    """
    if nu <= 0:
        raise DomainError("swirl transport requires nu > 0")
    grid = SolverGrid.from_xi(xi_grid)
    theta = np.asarray(theta, dtype=float)
    if theta.shape != grid.x.shape:
        raise DomainError("theta samples must match the grid")
    theta_bar = -np.hypot(1.0, grid.xi) * theta
    return _swirl_quadrature(grid, theta_bar, nu, v_inf, v0)


def _swirl_quadrature(grid: SolverGrid, theta_bar, nu, v_inf, v0=0.0):
    s = grid.s
    running = cumulative_integral(s, theta_bar * grid.dxds)
    exponent = -running / nu
    shift = exponent.max()
    if shift - exponent.min() > 700.0:
        raise QuadratureOverflowError(shift - exponent.min())
    growth = np.exp(exponent - shift)
    integral = cumulative_integral(s, growth * grid.dxds)
    if integral[-1] == 0.0:
        raise QuadratureOverflowError(np.inf)
    c = (v_inf - v0) / integral[-1]
    return v0 + c * integral


def solve_theta_given_V(
    xi_grid,
    v,
    params: FlowParameters,
    config: SolverConfig = SolverConfig(),
    coordinate="compact",
    forcing: Optional[SwirlForcing] = None,
):
    """Integrate the theta balance outward from theta(0) = 0 given V.

    Returns ``(theta, theta_prime, theta_bar)`` on the grid.  The default
    path integrates nu*theta_bar' = (G + e0*phi)/(1-x^2) - theta_bar^2/2 in
    the compact coordinate with an adaptive embedded 4(5) pair and dense
    output; ``coordinate="direct"`` integrates the equivalent xi-form
    instead, as a cross-validation path.  theta'(0) is forced to zero by
    the balance itself since both G and phi vanish at the origin.

    Raises :class:`BlowUpError` if |theta_bar| escapes the configured bound
    before the truncation point, and :class:`StepBudgetError` when the
    integrator stalls (stiff parameter combinations).
    """
    if params.nu <= 0:
        raise DomainError("the viscous balance requires nu > 0")
    grid = SolverGrid.from_xi(xi_grid)
    if forcing is None:
        forcing = SwirlForcing(grid, np.asarray(v, dtype=float))
    nu, e0 = params.nu, params.e0

    if coordinate == "compact":
        theta_bar = _integrate_compact(grid, forcing, nu, e0, config)
        theta = -theta_bar * np.sqrt((1.0 - grid.x) * (1.0 + grid.x))
    elif coordinate == "direct":
        theta = _integrate_direct(grid, forcing, nu, e0, config)
        theta_bar = -np.hypot(1.0, grid.xi) * theta
    else:
        raise DomainError(f"unknown coordinate mode {coordinate!r}")

    g_vals = forcing.on_grid()
    theta_prime = (
        0.5 * theta**2 - nu * grid.xi * theta - g_vals - e0 * phi(grid.xi)
    ) / (nu * (1.0 + grid.xi**2))
    return theta, theta_prime, theta_bar


def _march(rhs, t_end, t_grid, config, escape=None):
    """March an RK45 integrator across [0, t_end], sampling dense output."""
    solver = RK45(
        rhs,
        0.0,
        np.array([0.0]),
        t_end,
        rtol=config.ode_tol,
        atol=config.ode_tol,
    )
    out = np.empty_like(t_grid)
    out[0] = 0.0
    j, steps = 1, 0
    while solver.status == "running":
        solver.step()
        steps += 1
        if not np.isfinite(solver.y[0]) or abs(solver.y[0]) > config.blowup_bound:
            raise BlowUpError(escape(solver.t) if escape else solver.t, config.blowup_bound)
        if steps > config.max_steps:
            raise StepBudgetError(escape(solver.t) if escape else solver.t, config.max_steps)
        dense = solver.dense_output()
        while j < t_grid.size and t_grid[j] <= solver.t:
            out[j] = dense(t_grid[j])[0]
            j += 1
    if solver.status == "failed":
        raise StepBudgetError(escape(solver.t) if escape else solver.t, steps)
    while j < t_grid.size:
        out[j] = solver.y[0]
        j += 1
    return out


def _integrate_compact(grid, forcing, nu, e0, config):
    def rhs(x, y):
        drive = (forcing.at_x(x) + e0 * x / (1.0 + x)) / (1.0 - x * x)
        return np.array([(drive - 0.5 * y[0] * y[0]) / nu])

    return _march(rhs, grid.x[-1], grid.x, config)


def _integrate_direct(grid, forcing, nu, e0, config):
    def rhs(xi, y):
        th = y[0]
        g = forcing.at_x(xi / np.hypot(1.0, xi))
        return np.array(
            [(0.5 * th * th - nu * xi * th - g - e0 * phi(xi)) / (nu * (1.0 + xi * xi))]
        )

    # escape locations are reported in the compact coordinate for consistency
    return _march(rhs, grid.xi[-1], grid.xi, config, escape=lambda t: xi_to_x(t))


def picard_solve(params: FlowParameters, config: SolverConfig = SolverConfig()):
    """Damped alternating solve of the coupled theta/V system.

    Starts from the zero-theta swirl profile V = v_inf*xi/sqrt(1+xi^2),
    alternates the theta integration and the swirl quadrature, and damps
    the theta update (halving the factor, floored at 1/16, whenever the
    sup-norm update grows).  Convergence is declared when the theta update
    drops below ``picard_tol``; the pressure is then recovered exactly from
    the integrated meridional momentum balance with P(0) = e0.

    Returns a :class:`SimilarityProfile` whose ``convergence`` block holds
    the iteration count, both equation residuals (sup-norm over the whole
    grid, derivatives by finite differences), and a blow-up stub.
    """
    if params.nu <= 0:
        raise DomainError("picard_solve requires nu > 0")
    if params.xi0 != 0.0:
        raise DomainError("the viscous solver is formulated on the half space xi >= 0")
    grid = SolverGrid.build(config.x_max, config.n_grid)
    nu, v_inf, e0 = params.nu, params.v_swirl, params.e0

    v = v_inf * grid.x.copy()  # exact solution of the zero-theta limit
    theta_bar = np.zeros_like(grid.x)
    theta = np.zeros_like(grid.x)
    omega = config.damping
    history = []
    forcing = None

    for sweep in range(1, config.max_iters + 1):
        forcing = SwirlForcing(grid, v, v_inf)
        try:
            theta_bar_new = _integrate_compact(grid, forcing, nu, e0, config)
        except (BlowUpError, StepBudgetError) as exc:
            exc.iteration = sweep
            raise
        theta_bar = theta_bar + omega * (theta_bar_new - theta_bar)
        theta_new = -theta_bar * np.sqrt((1.0 - grid.x) * (1.0 + grid.x))
        delta = float(np.max(np.abs(theta_new - theta)))
        theta = theta_new
        v = _swirl_quadrature(grid, theta_bar, nu, v_inf)
        history.append(delta)
        log.debug("sweep %d: |dtheta| = %.3e (damping %.4g)", sweep, delta, omega)
        if len(history) > 1 and delta > history[-2]:
            omega = max(omega / 2.0, 1.0 / 16.0)
        if delta < config.picard_tol:
            break
    else:
        raise MaxIterationsError(config.max_iters, history)

    forcing = SwirlForcing(grid, v, v_inf)
    g_vals = forcing.on_grid()
    xi = grid.xi
    theta_prime = (0.5 * theta**2 - nu * xi * theta - g_vals - e0 * phi(xi)) / (
        nu * (1.0 + xi**2)
    )

    # integrated meridional momentum balance from the plane, P(0) = e0:
    # (1+xi^2) P = e0 + nu*(xi*theta - (1+xi^2)*theta') - theta^2/2 - inner(xi)
    p = (
        e0
        + nu * (xi * theta - (1.0 + xi**2) * theta_prime)
        - 0.5 * theta**2
        - forcing.inner_integral()
    ) / (1.0 + xi**2)

    profile = SimilarityProfile(
        grid=xi,
        theta=theta,
        theta_prime=theta_prime,
        v=v,
        p=p,
        params=params,
        convergence=None,
    )
    res_a, res_b = viscous_residuals(profile)
    convergence = {
        "iterations": sweep,
        "residual_2_5a": float(np.max(np.abs(res_a))),
        "residual_2_5b": float(np.max(np.abs(res_b))),
        "blowup": None,
    }
    return replace(profile, convergence=convergence)


def viscous_residuals(profile: SimilarityProfile):
    """Pointwise residuals of both viscous balance laws on the stored grid.

    Derivatives come from 4th-order finite differences in the log-compact
    coordinate (independent of how theta was integrated), converted to
    xi-space by the exact chain rule.  Returns ``(res_theta, res_swirl)``
    arrays for

        theta^2/2 - nu*[(1+xi^2)theta' + xi*theta] - G - e0*phi
        nu*V'' + (3*nu*xi - theta)/(1+xi^2)*V'
    """
    params = profile.params
    if params.nu <= 0:
        raise DomainError("viscous residuals require nu > 0")
    grid = SolverGrid.from_xi(profile.grid)
    if not _uniform(grid.s):
        raise DomainError("viscous residuals expect a solver-built (log-compact) grid")
    h = grid.s[1] - grid.s[0]
    x, xi = grid.x, grid.xi
    nu, e0 = params.nu, params.e0

    forcing = SwirlForcing(grid, profile.v, params.v_swirl)
    g_vals = forcing.on_grid()

    theta_bar = -np.hypot(1.0, xi) * profile.theta
    tb_s = derivative_uniform(theta_bar, h)
    drive = (g_vals + e0 * phi(xi)) / (1.0 - x**2)
    res_bar = nu * tb_s / (1.0 - x) - (drive - 0.5 * theta_bar**2)
    res_theta = -res_bar * (1.0 - x**2)

    v_s = derivative_uniform(profile.v, h)
    v_ss = derivative_uniform(v_s, h)
    v_x = v_s / (1.0 - x)
    v_xx = (v_ss / (1.0 - x) + v_s / (1.0 - x)) / (1.0 - x)
    v_p = v_x * (1.0 - x**2) ** 1.5
    v_pp = (1.0 - x**2) ** 3 * v_xx - 3.0 * x * (1.0 - x**2) ** 2 * v_x
    res_swirl = nu * v_pp + (3.0 * nu * xi - profile.theta) / (1.0 + xi**2) * v_p
    return res_theta, res_swirl


def _uniform(t, rtol=1e-8):
    dt = np.diff(t)
    return np.all(np.abs(dt - dt[0]) <= rtol * dt[0])


# ---------------------------------------------------------------------------
# Regime classification and parameter sweeps


def classify_regime(profile: SimilarityProfile, noise_tol=1e-8) -> RegimeLabel:
    """Label the meridional circulation pattern of a profile.

    The radial velocity U is averaged over the first 5% of grid points past
    the lower boundary (outward means U > 0 near the plane), the axial
    velocity W over the last 5% (downward means W < 0 near the vortex
    line).  Averages within ``noise_tol`` of zero, or the sign pair that no
    circulation pattern matches, yield ``INDETERMINATE``.
    """
    n = len(profile)
    k = max(1, round(0.05 * n))
    u_near = float(np.mean(profile.u[1 : 1 + k]))
    w_far = float(np.mean(profile.w[-k:]))
    if abs(u_near) < noise_tol or abs(w_far) < noise_tol:
        return RegimeLabel.INDETERMINATE
    if u_near > 0 and w_far < 0:
        return RegimeLabel.OUTWARD_DOWNWARD
    if u_near < 0 and w_far > 0:
        return RegimeLabel.INWARD_UPWARD
    if u_near < 0 and w_far < 0:
        return RegimeLabel.INWARD_DOWNWARD
    log.debug("unclassified sign pattern: U=%.3e, W=%.3e", u_near, w_far)
    return RegimeLabel.INDETERMINATE


SWEEP_CSV_HEADER = "nu,v_inf,e0,converged,regime,iters,res_a,res_b"


@dataclass(frozen=True)
class SweepRecord:
    nu: float
    v_inf: float
    e0: float
    converged: bool
    regime: str
    iters: int
    res_a: float
    res_b: float
    failure: str = ""

    def csv_row(self):
        res_a = "" if np.isnan(self.res_a) else f"{self.res_a:.6e}"
        res_b = "" if np.isnan(self.res_b) else f"{self.res_b:.6e}"
        return (
            f"{self.nu:.17g},{self.v_inf:.17g},{self.e0:.17g},"
            f"{str(self.converged).lower()},{self.regime},{self.iters},{res_a},{res_b}"
        )


def _sweep_point(args):
    nu, v_inf, e0, config = args
    params = FlowParameters(nu=nu, v_swirl=v_inf, e0=e0)
    try:
        profile = picard_solve(params, config)
    except (BlowUpError, StepBudgetError, QuadratureOverflowError) as exc:
        return SweepRecord(nu, v_inf, e0, False, "", 0, np.nan, np.nan, type(exc).__name__)
    except MaxIterationsError as exc:
        return SweepRecord(
            nu, v_inf, e0, False, "", exc.max_iters, np.nan, np.nan, type(exc).__name__
        )
    conv = profile.convergence
    return SweepRecord(
        nu,
        v_inf,
        e0,
        True,
        classify_regime(profile).value,
        conv["iterations"],
        conv["residual_2_5a"],
        conv["residual_2_5b"],
    )


def parameter_sweep(nu_values, v_inf_values, e0_values, config=SolverConfig(), jobs=1):
    """Run the coupled solve over a parameter grid, one record per point.

    Per-point failures are recorded, never raised.  Records come back in
    deterministic lexicographic parameter order regardless of how many
    workers ran them.
    """
    points = [
        (float(nu), float(vi), float(e0), config)
        for nu in nu_values
        for vi in v_inf_values
        for e0 in e0_values
    ]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_sweep_point, points))
    else:
        records = [_sweep_point(p) for p in points]
    return records


def sweep_to_csv(records):
    lines = [SWEEP_CSV_HEADER]
    lines.extend(r.csv_row() for r in records)
    return "\n".join(lines) + "\n"

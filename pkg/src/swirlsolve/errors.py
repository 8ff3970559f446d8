"""Exception types shared across the solver package."""


class SwirlSolveError(Exception):
    """Base class for all package-specific failures."""


class DomainError(SwirlSolveError):
    """Inputs violate a mathematical precondition (sign, range, shape)."""


class OutOfDomainError(DomainError):
    """Requested evaluation points fall outside the profile's grid.

    Carries the offending (r, z) pairs so callers can report or trim them.
    """

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = list(offending) if offending is not None else []


class SolverFailure(SwirlSolveError):
    """Base class for numerical-solve failures with diagnostic payload."""


class BlowUpError(SolverFailure):
    """The swirl-free stream variable escaped the configured bound.

    ``x_escape`` is the compact coordinate at which the bound was crossed.
    """

    def __init__(self, x_escape, bound, iteration=None):
        self.x_escape = float(x_escape)
        self.bound = float(bound)
        self.iteration = iteration
        where = f" (fixed-point sweep {iteration})" if iteration else ""
        super().__init__(
            f"blow-up: |theta_bar| exceeded {bound:g} at x={x_escape:.6g}{where}"
        )


class StepBudgetError(SolverFailure):
    """The adaptive integrator exhausted its step budget (stiff regime)."""

    def __init__(self, x_reached, max_steps, iteration=None):
        self.x_reached = float(x_reached)
        self.max_steps = int(max_steps)
        self.iteration = iteration
        where = f" (fixed-point sweep {iteration})" if iteration else ""
        super().__init__(
            f"step budget exhausted after {max_steps} steps at x={x_reached:.6g}{where}; "
            "the problem is too stiff at these parameters"
        )


class QuadratureOverflowError(SolverFailure):
    """Integrating-factor range overflowed (theta too large relative to nu)."""

    def __init__(self, exponent_range):
        self.exponent_range = float(exponent_range)
        super().__init__(
            "swirl quadrature overflow: integrating-factor exponent spans "
            f"{exponent_range:.3g}; theta is too large relative to nu"
        )


class MaxIterationsError(SolverFailure):
    """Fixed-point iteration failed to meet tolerance within the cap.

    ``history`` holds the sup-norm update per sweep.
    """

    def __init__(self, max_iters, history):
        self.max_iters = int(max_iters)
        self.history = list(history)
        tail = ", ".join(f"{d:.3e}" for d in self.history[-3:])
        super().__init__(
            f"no convergence after {max_iters} sweeps; last updates [{tail}]"
        )

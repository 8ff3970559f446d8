"""Shared numerical helpers: quadrature and differentiation.

Everything here operates on plain numpy arrays and stays independent of the
flow model; the model modules own the physics.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline


def cumulative_integral(t, y):
    """Cumulative integral of samples ``y(t)`` evaluated at the sample points.

    Uses the antiderivative of a not-a-knot cubic spline, which is exact for
    cubic data and O(h^4) for smooth integrands on non-uniform grids.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.ndim != 1 or t.shape != y.shape or t.size < 2:
        raise ValueError("need matching 1-d arrays with at least 2 samples")
    return CubicSpline(t, y).antiderivative()(t)


def spline_antiderivative(t, y):
    """Antiderivative callable of the cubic spline through ``(t, y)``."""
    return CubicSpline(np.asarray(t, float), np.asarray(y, float)).antiderivative()


def adaptive_simpson(f, a, b, tol=1e-10, max_depth=40):
    """Classic recursive adaptive Simpson quadrature of ``f`` over [a, b].

    Exact for cubic integrands at the first level; subdivides until the
    Richardson error estimate drops below ``tol`` on every subinterval.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        flm = f(lmid)
        frm = f(rmid)
        left = simpson(lo, mid, flo, flm, fmid)
        right = simpson(mid, hi, fmid, frm, fhi)
        err = left + right - whole
        if depth <= 0 or abs(err) <= 15.0 * eps:
            return left + right + err / 15.0
        return recurse(lo, mid, flo, flm, fmid, left, eps / 2.0, depth - 1) + recurse(
            mid, hi, fmid, frm, fhi, right, eps / 2.0, depth - 1
        )

    mid = 0.5 * (a + b)
    fa, fm, fb = f(a), f(mid), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, max_depth)


def derivative_uniform(y, h):
    """First derivative of uniformly spaced samples, 4th-order accurate.

    Five-point central stencil inside, one-sided 4th-order stencils at the
    two points nearest each edge.
    """
    y = np.asarray(y, dtype=float)
    if y.size < 6:
        raise ValueError("need at least 6 samples for the 5-point stencil")
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / (12.0 * h)
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
    d[0] = (c @ y[:5]) / h
    d[1] = (c @ y[1:6]) / h
    d[-1] = -(c @ y[-1:-6:-1]) / h
    d[-2] = -(c @ y[-2:-7:-1]) / h
    return d


def richardson_derivative(f, x, h0=None, levels=3, h_max=None):
    """Richardson-extrapolated central difference of a scalar callable.

    Suitable for smooth closed-form functions; reaches ~1e-10 absolute
    accuracy without analytic derivatives.  ``h_max`` caps the widest
    stencil offset, e.g. to keep evaluations inside a semi-infinite domain.
    """
    x = float(x)
    if h0 is None:
        h0 = 1e-2 * max(1.0, abs(x))
    if h_max is not None:
        h0 = min(h0, h_max)
    if h0 <= 0:
        raise ValueError("differentiation step collapsed to zero")
    tab = np.empty((levels, levels))
    h = h0
    for i in range(levels):
        tab[i, 0] = (f(x + h) - f(x - h)) / (2.0 * h)
        for j in range(1, i + 1):
            fac = 4.0**j
            tab[i, j] = (fac * tab[i, j - 1] - tab[i - 1, j - 1]) / (fac - 1.0)
        h /= 2.0
    return tab[levels - 1, levels - 1]

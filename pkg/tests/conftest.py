import numpy as np
import pytest

import swirlsolve as sw


@pytest.fixture(scope="session")
def viscous_111():
    """Converged coupled solve at (nu, v_inf, e0) = (1, 1, 1)."""
    params = sw.FlowParameters(nu=1.0, v_swirl=1.0, e0=1.0)
    return sw.picard_solve(params, sw.SolverConfig())


@pytest.fixture(scope="session")
def euler_branch_pos():
    params = sw.FlowParameters(nu=0.0, v_swirl=1.0, e0=1.0, branch=1)
    return sw.euler_continuous(params, sw.default_grid(xi_max=50.0, n=1200))


@pytest.fixture(scope="session")
def euler_branch_neg():
    params = sw.FlowParameters(nu=0.0, v_swirl=1.0, e0=1.0, branch=-1)
    return sw.euler_continuous(params, sw.default_grid(xi_max=50.0, n=1200))


@pytest.fixture
def rest_profile():
    """All-zero profile on a modest grid (theta = V = P = 0)."""
    grid = np.linspace(0.0, 10.0, 64)
    zeros = np.zeros_like(grid)
    params = sw.FlowParameters(nu=1.0, v_swirl=0.0, e0=0.0)
    return sw.SimilarityProfile(
        grid=grid, theta=zeros, theta_prime=zeros, v=zeros, p=zeros, params=params
    )

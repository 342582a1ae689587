"""Nonlinear pendulum reached by homotopy from the linear problem."""

import numpy as np

from ..linalg import NormKind, NormTag, norm
from .base import Grid1D, Problem, dirichlet_jacobian, second_difference, solve_seed


class Pendulum(Problem):
    """Homotopy ``theta'' + eps sin(theta) = 0`` on [0, 10], theta = 2 at both ends."""

    name = "pendulum"
    boundary_value = 2.0

    def __init__(self, n_interior=999):
        self.grid = Grid1D(n_interior, 0.0, 10.0)
        self.dimension = n_interior
        self.deflation_norm = NormKind(NormTag.H1, self.grid.h, zero_boundary=True)

    def residual(self, theta, eps):
        bc = self.boundary_value
        return second_difference(theta, self.grid.h, bc, bc) + eps * np.sin(theta)

    def jacobian(self, theta, eps):
        return dirichlet_jacobian(eps * np.cos(theta), self.grid.h)

    def residual_norm(self, r):
        return self.grid.h**2 * float(np.linalg.norm(r))

    def functional(self, theta, eps):
        """Left-end slope times the H1 norm of the full nodal solution."""
        h, bc = self.grid.h, self.boundary_value
        full = np.concatenate(([bc], theta, [bc]))
        slope = (theta[0] - bc) / h
        return slope * norm(full, NormKind(NormTag.H1, h))

    def seeds(self, eps):
        return solve_seed(self, np.full(self.dimension, self.boundary_value), eps)

    def describe(self):
        return {"name": self.name, "n_interior": self.grid.n_interior}


def pendulum_residual(theta, eps):
    return Pendulum(theta.size).residual(theta, eps)

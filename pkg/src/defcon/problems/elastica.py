"""Euler elastica ``theta'' + lam**2 sin(theta) = mu`` with clamped angles."""

import numpy as np

from ..linalg import NormKind, NormTag, norm
from .base import Grid1D, Problem, dirichlet_jacobian, second_difference, solve_seed


class Elastica(Problem):
    name = "elastica"

    def __init__(self, mu=0.0, n_interior=999, guess_amplitude=1e-2):
        self.mu = float(mu)
        self.grid = Grid1D(n_interior, 0.0, 1.0)
        self.dimension = n_interior
        self.deflation_norm = NormKind(NormTag.H1, self.grid.h, zero_boundary=True)
        self.guess_amplitude = guess_amplitude
        s = self.grid.interior
        # no reflection symmetry in s or theta: reaches every buckling mode
        self._generic = s * (1.0 - s) * np.exp(2.0 * s)
        self._generic /= norm(self._generic, self.deflation_norm)
        if self.mu == 0.0:
            self.symmetry_actions = (np.negative,)

    def residual(self, theta, lam):
        h = self.grid.h
        return second_difference(theta, h) + lam * lam * np.sin(theta) - self.mu

    def jacobian(self, theta, lam):
        return dirichlet_jacobian(lam * lam * np.cos(theta), self.grid.h)

    def residual_norm(self, r):
        # norm of the h**2-scaled difference equations
        return self.grid.h**2 * float(np.linalg.norm(r))

    def functional(self, theta, lam):
        """L2 norm signed by the slope at the left end."""
        l2 = norm(theta, NormKind(NormTag.L2, self.grid.h, zero_boundary=True))
        return float(np.sign(theta[0])) * l2

    def seeds(self, lam):
        if self.mu == 0.0:
            return []
        # the lam = 0 solution of theta'' = mu, refined at the requested lam
        s = self.grid.interior
        return solve_seed(self, 0.5 * self.mu * s * (s - 1.0), lam)

    def trivial_solution(self, lam):
        return np.zeros(self.dimension) if self.mu == 0.0 else None

    def trivial_guess(self, lam):
        if self.mu != 0.0:
            return None
        return self.guess_amplitude * self._generic

    def extra_guesses(self, solutions, lam):
        return []

    def describe(self):
        return {"name": self.name, "mu": self.mu, "n_interior": self.grid.n_interior}


def elastica_residual(theta, lam, mu=0.0):
    return Elastica(mu, theta.size).residual(theta, lam)

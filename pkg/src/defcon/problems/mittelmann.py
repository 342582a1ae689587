"""Mittelmann's generalized Bratu problem on the unit square.

    -lap(y) = -10 (y - lam exp(y))  in (-0.5, 0.5)^2,  dy/dn = 0 on the boundary

Unknowns live on every grid node; the Neumann condition mirrors the first
interior row into a ghost row, which keeps the stencil second order.
"""

import math

import numpy as np
from scipy.special import lambertw

from ..linalg import BandedMatrix, NormKind, NormTag, norm
from .base import Grid2D, Problem

# treat a solution as spatially constant below this peak-to-peak spread
CONSTANT_SPREAD = 1e-8


def constant_solutions(lam):
    """Roots of ``y = lam exp(y)``, lower one first; empty above 1/e."""
    if lam <= 0.0:
        return [0.0] if lam == 0.0 else []
    if lam > math.exp(-1.0):
        return []
    lower = -lambertw(-lam, 0).real
    upper = -lambertw(-lam, -1).real
    return [lower] if lower == upper else [lower, upper]


def mittelmann_bifurcation_oracle(m, n):
    """Continuum bifurcation point ``(ybar, lam)`` for Neumann mode ``(m, n)``."""
    if m < 0 or n < 0:
        raise ValueError("mode numbers must be non-negative")
    eigenvalue = (m * m + n * n) * math.pi**2
    ybar = 1.0 + eigenvalue / 10.0
    return ybar, ybar * math.exp(-ybar)


class Mittelmann(Problem):
    name = "mittelmann"

    def __init__(self, n=41, guess_amplitude=0.1):
        self.grid = Grid2D(n)
        self.dimension = n * n
        h = self.grid.h
        self.deflation_norm = NormKind(NormTag.H1, h, shape=(n, n))
        self._l2 = NormKind(NormTag.L2, h, shape=(n, n))
        self.guess_amplitude = guess_amplitude
        self._laplacian_bands = self._assemble_laplacian()
        # first Neumann eigenfunctions, cos(pi xi) with xi = x + 1/2 in [0, 1]
        X, Y = self.grid.coordinates
        cx, cy = np.cos(math.pi * (X + 0.5)), np.cos(math.pi * (Y + 0.5))
        self._modes = [cx.ravel(), cy.ravel(), (cx * cy).ravel()]

    def _assemble_laplacian(self):
        """Band array of the discrete -lap with mirrored ghost nodes."""
        n, h2 = self.grid.n, self.grid.h**2
        N = n * n
        col = np.arange(N) % n
        row = np.arange(N) // n
        A = BandedMatrix.zeros(N, n, n)
        A.set_diagonal(0, np.full(N, 4.0 / h2))
        # neighbour coefficient doubles where the mirrored ghost folds back in
        east = np.where(col == 0, -2.0, -1.0) / h2
        east[col == n - 1] = 0.0
        west = np.where(col == n - 1, -2.0, -1.0) / h2
        west[col == 0] = 0.0
        north = np.where(row == 0, -2.0, -1.0) / h2
        south = np.where(row == n - 1, -2.0, -1.0) / h2
        A.set_diagonal(1, east[:-1])
        A.set_diagonal(-1, west[1:])
        A.set_diagonal(n, north[:-n])
        A.set_diagonal(-n, south[n:])
        return A.bands

    def neg_laplacian(self, y):
        n, h2 = self.grid.n, self.grid.h**2
        Y = np.pad(np.reshape(y, (n, n)), 1, mode="reflect")
        lap = Y[1:-1, 2:] + Y[1:-1, :-2] + Y[2:, 1:-1] + Y[:-2, 1:-1] - 4.0 * Y[1:-1, 1:-1]
        return -lap.ravel() / h2

    def residual(self, y, lam):
        with np.errstate(over="ignore"):
            return self.neg_laplacian(y) + 10.0 * (y - lam * np.exp(y))

    def jacobian(self, y, lam):
        n = self.grid.n
        J = BandedMatrix(self._laplacian_bands.copy(), n, n)
        with np.errstate(over="ignore"):
            J.bands[n] += 10.0 * (1.0 - lam * np.exp(y))
        return J

    def residual_norm(self, r):
        return self.grid.h**2 * float(np.linalg.norm(r))

    def functional(self, y, lam):
        return norm(y, self._l2)

    def seeds(self, lam):
        return [np.full(self.dimension, c) for c in constant_solutions(lam)]

    def extra_guesses(self, solutions, lam):
        """Eigenmode perturbations of the constant solutions, to break symmetry."""
        out = []
        for y in solutions:
            if np.ptp(y) > CONSTANT_SPREAD:
                continue
            for mode in self._modes:
                out.append(y + self.guess_amplitude * mode)
                out.append(y - self.guess_amplitude * mode)
        return out

    def describe(self):
        return {"name": self.name, "n": self.grid.n}


def mittelmann_residual(y, lam, n=None):
    n = int(round(math.sqrt(np.size(y)))) if n is None else n
    return Mittelmann(n).residual(np.asarray(y, dtype=float), lam)

from dataclasses import dataclass

import numpy as np

from ..linalg import EUCLIDEAN, BandedMatrix
from ..newton import newton_solve


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [a, b]; only the interior nodes carry unknowns."""

    n_interior: int
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if self.n_interior < 3:
            raise ValueError("a 1-D grid needs at least 3 interior nodes")

    @property
    def h(self):
        return (self.b - self.a) / (self.n_interior + 1)

    @property
    def interior(self):
        return self.a + self.h * np.arange(1, self.n_interior + 1)


@dataclass(frozen=True)
class Grid2D:
    """``n`` x ``n`` nodes on (-0.5, 0.5)^2, boundary nodes included."""

    n: int

    def __post_init__(self):
        if self.n < 5:
            raise ValueError("a 2-D grid needs at least 5 nodes per side")

    @property
    def h(self):
        return 1.0 / (self.n - 1)

    @property
    def coordinates(self):
        """Node coordinates ``(X, Y)`` as ``(n, n)`` arrays, row index = y."""
        t = np.linspace(-0.5, 0.5, self.n)
        return np.meshgrid(t, t)


class Problem:
    """A parameter-dependent system ``f(u, lam) = 0`` plus diagram metadata.

    Subclasses provide ``residual``, ``jacobian`` (a ``BandedMatrix``),
    ``functional`` and ``seeds``. The remaining hooks default to "absent".
    """

    name = "problem"
    dimension = 0
    deflation_norm = EUCLIDEAN
    # maps u -> g.u for each non-identity element of a finite symmetry group
    symmetry_actions = ()

    def residual(self, u, lam):
        raise NotImplementedError

    def jacobian(self, u, lam):
        raise NotImplementedError

    def functional(self, u, lam):
        raise NotImplementedError

    def seeds(self, lam):
        """Known solutions at the start of a sweep."""
        raise NotImplementedError

    def residual_norm(self, r):
        return float(np.linalg.norm(r))

    def trivial_solution(self, lam):
        """A solution valid for every parameter value, or None."""
        return None

    def trivial_guess(self, lam):
        """Discovery guess standing in for the trivial solution.

        The trivial solution itself cannot seed a deflated solve (its
        deflated residual is 0/0), so problems with a trivial branch may
        offer a symmetry-broken neighbour instead. None skips it.
        """
        return None

    def extra_guesses(self, solutions, lam):
        """Additional discovery guesses built from the current solution set."""
        return []

    def describe(self):
        """Parameters that identify this problem instance."""
        return {"name": self.name}


def solve_seed(problem, guess, lam):
    out = newton_solve(
        lambda u: problem.residual(u, lam),
        lambda u: problem.jacobian(u, lam),
        guess,
        residual_norm=problem.residual_norm,
    )
    return [out.solution] if out.converged else []


def second_difference(u, h, left=0.0, right=0.0):
    """Centred second difference of the interior values ``u`` with Dirichlet data."""
    padded = np.concatenate(([left], u, [right]))
    return (padded[2:] - 2.0 * padded[1:-1] + padded[:-2]) / (h * h)


def dirichlet_jacobian(diagonal_extra, h):
    """Tridiagonal Jacobian of the second difference plus a diagonal term."""
    n = diagonal_extra.size
    off = np.full(n - 1, 1.0 / (h * h))
    return BandedMatrix.tridiagonal(off, -2.0 / (h * h) + diagonal_extra, off)

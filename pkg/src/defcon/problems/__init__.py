"""Built-in benchmark problems, addressable by name."""

from .base import Grid1D, Grid2D, Problem
from .elastica import Elastica, elastica_residual
from .mittelmann import (
    Mittelmann,
    constant_solutions,
    mittelmann_bifurcation_oracle,
    mittelmann_residual,
)
from .pendulum import Pendulum, pendulum_residual
from .unity import RootsOfUnity, unity_functional, unity_residual

PROBLEMS = {
    "unity": RootsOfUnity,
    "elastica": Elastica,
    "pendulum": Pendulum,
    "mittelmann": Mittelmann,
}


def make_problem(name, mu=None, grid=None):
    """Instantiate a built-in problem; ``grid`` is interior nodes (1-D) or nodes per side (2-D)."""
    if name not in PROBLEMS:
        raise KeyError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}")
    if name == "unity":
        return RootsOfUnity()
    if name == "elastica":
        kwargs = {} if grid is None else {"n_interior": grid}
        return Elastica(mu=0.0 if mu is None else mu, **kwargs)
    if name == "pendulum":
        return Pendulum(**({} if grid is None else {"n_interior": grid}))
    return Mittelmann(**({} if grid is None else {"n": grid}))


__all__ = [
    "Problem",
    "Grid1D",
    "Grid2D",
    "RootsOfUnity",
    "Elastica",
    "Pendulum",
    "Mittelmann",
    "PROBLEMS",
    "make_problem",
    "unity_residual",
    "unity_functional",
    "elastica_residual",
    "pendulum_residual",
    "mittelmann_residual",
    "mittelmann_bifurcation_oracle",
    "constant_solutions",
]

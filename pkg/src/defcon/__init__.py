"""Deflated continuation for computing bifurcation diagrams."""

from .continuation import (
    BifurcationDiagram,
    BornBy,
    Branch,
    ConfigurationError,
    ContinuationConfig,
    run,
)
from .deflation import DeflationSingularityError, DeflationState
from .linalg import BandedMatrix, NormKind, NormTag, banded_lu_solve, det_sign, inner, norm
from .newton import NewtonConfig, NewtonOutcome, NewtonStatus, deflated_step, newton_solve
from .problems import make_problem

__version__ = "0.1.0"

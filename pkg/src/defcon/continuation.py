"""Deflated continuation: continue known branches, then deflate them to find new ones.

At each parameter step every known solution is first continued with plain
Newton, each success being deflated as soon as it is found. Every previous
solution is then reused as a discovery guess against the accumulated
deflated system until Newton fails. Deflation is rebuilt from scratch at
every step, so only solutions at the current parameter are ever deflated.
"""

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .deflation import DEFAULT_DISTINCTNESS, DeflationState
from .linalg import norm
from .newton import NewtonConfig, newton_solve

__all__ = [
    "BornBy",
    "Branch",
    "BifurcationDiagram",
    "ConfigurationError",
    "ContinuationConfig",
    "run",
    "continue_pass",
    "discovery_pass",
    "backward_completion",
    "trivial_branch_setup",
    "jsonl_progress",
]

RETENTION = ("none", "endpoints", "all")


class ConfigurationError(ValueError):
    pass


class BornBy(str, Enum):
    SEED = "Seed"
    CONTINUATION = "Continuation"
    DEFLATION = "Deflation"
    SYMMETRY = "Symmetry"
    BACKWARD = "BackwardPass"


@dataclass(frozen=True)
class ContinuationConfig:
    lambda_min: float
    lambda_max: float
    delta_lambda: float
    newton: NewtonConfig = field(default_factory=NewtonConfig)
    power: float = 2.0
    shift: float = 1.0
    distinctness: float = DEFAULT_DISTINCTNESS
    max_consecutive_discovery_failures: int = 1
    backward_pass: bool = False
    retain: str = "endpoints"

    def __post_init__(self):
        span = self.lambda_max - self.lambda_min
        if not self.delta_lambda or not math.isfinite(self.delta_lambda):
            raise ConfigurationError("delta_lambda must be finite and nonzero")
        if span * self.delta_lambda < 0:
            raise ConfigurationError("delta_lambda points away from lambda_max")
        if not (self.power >= 1 and self.shift >= 0):
            raise ConfigurationError("deflation needs power >= 1 and shift >= 0")
        if not self.distinctness > 0:
            raise ConfigurationError("distinctness must be positive")
        if self.max_consecutive_discovery_failures < 1:
            raise ConfigurationError("max_consecutive_discovery_failures must be >= 1")
        if self.retain not in RETENTION:
            raise ConfigurationError(f"retain must be one of {RETENTION}")

    def lambda_grid(self):
        """Swept values: lambda_min, then steps until lambda_max is reached or passed."""
        steps = math.ceil((self.lambda_max - self.lambda_min) / self.delta_lambda - 1e-9)
        k = np.arange(max(steps, 0) + 1)
        # rounding keeps decimal step sizes on their decimal grid
        return np.round(self.lambda_min + k * self.delta_lambda, 12)


@dataclass
class Branch:
    """Points of one branch, stored in sweep order (grid indices increasing)."""

    id: int
    born_by: BornBy
    indices: list = field(default_factory=list)
    lambdas: list = field(default_factory=list)
    functionals: list = field(default_factory=list)
    origins: list = field(default_factory=list)
    solutions: list = field(default_factory=list)
    trivial: bool = False
    end_status: str = "active"

    def append(self, index, lam, value, origin, u):
        self.indices.append(index)
        self.lambdas.append(float(lam))
        self.functionals.append(float(value))
        self.origins.append(BornBy(origin))
        self.solutions.append(u)

    def prepend(self, index, lam, value, origin, u):
        self.indices.insert(0, index)
        self.lambdas.insert(0, float(lam))
        self.functionals.insert(0, float(value))
        self.origins.insert(0, BornBy(origin))
        self.solutions.insert(0, u)

    @property
    def points(self):
        return list(zip(self.lambdas, self.functionals))

    @property
    def support(self):
        return min(self.lambdas), max(self.lambdas)

    def covers(self, lam):
        lo, hi = self.support
        return lo <= lam <= hi

    def solution_at(self, index):
        try:
            return self.solutions[self.indices.index(index)]
        except ValueError:
            return None

    def retain(self, policy):
        if policy == "all":
            return
        keep = {0, len(self.solutions) - 1} if policy == "endpoints" else set()
        self.solutions = [u if i in keep else None for i, u in enumerate(self.solutions)]


@dataclass
class BifurcationDiagram:
    branches: list
    lambda_grid: list
    solution_counts: list

    def count_at(self, lam):
        """Number of branches whose support contains ``lam``."""
        return sum(b.covers(lam) for b in self.branches)

    def branch(self, branch_id):
        for b in self.branches:
            if b.id == branch_id:
                return b
        raise KeyError(branch_id)

    def solutions_at(self, index):
        """``(branch, solution)`` pairs recorded at grid index ``index``."""
        out = []
        for b in self.branches:
            u = b.solution_at(index)
            if u is not None:
                out.append((b, u))
        return out

    def recount(self):
        self.solution_counts = [self.count_at(lam) for lam in self.lambda_grid]


def jsonl_progress(stream):
    """Progress callback writing one JSON object per line to ``stream``."""

    def emit(record):
        stream.write(json.dumps(record, sort_keys=True) + "\n")

    return emit


class _Sweep:
    """Mutable bookkeeping shared by the passes of one run."""

    def __init__(self, problem, cfg, progress):
        self.problem = problem
        self.cfg = cfg
        self.progress = progress
        self.grid = cfg.lambda_grid()
        self.branches = {}
        self.trivial_id = None

    def new_branch(self, born_by, trivial=False):
        b = Branch(len(self.branches), BornBy(born_by), trivial=trivial)
        self.branches[b.id] = b
        return b

    def record(self, branch, index, u, origin):
        lam = self.grid[index]
        branch.append(index, lam, self.problem.functional(u, lam), origin, u)

    def emit(self, **record):
        if self.progress is not None:
            self.progress(record)

    def empty_deflation(self):
        return DeflationState((), self.cfg.power, self.cfg.shift, self.problem.deflation_norm)

    def solve(self, lam, u0, deflation):
        p = self.problem
        return newton_solve(
            lambda u: p.residual(u, lam),
            lambda u: p.jacobian(u, lam),
            u0,
            deflation,
            self.cfg.newton,
            residual_norm=p.residual_norm,
        )


def trivial_branch_setup(problem, deflation, lam, distinctness=DEFAULT_DISTINCTNESS):
    """Deflate the problem's trivial solution at ``lam``, if it declares one.

    Returns the updated state and the trivial solution (or None).
    """
    ubar = problem.trivial_solution(lam)
    if ubar is None:
        return deflation, None
    deflation, _ = deflation.deflate(ubar, distinctness)
    return deflation, np.asarray(ubar, dtype=float)


def continue_pass(sweep, current, index, deflation):
    """Continue each known solution to grid point ``index``.

    ``current`` is a list of ``(branch_id, u)`` in ascending id order.
    Returns ``(successes, failures, deflation)``.
    """
    lam = sweep.grid[index]
    successes, failures = [], []
    for bid, u0 in current:
        out = sweep.solve(lam, u0, deflation)
        accepted = False
        if out.converged:
            deflation, accepted = deflation.deflate(out.solution, sweep.cfg.distinctness)
        status = out.status.value if not out.converged or accepted else "Duplicate"
        sweep.emit(
            **{"lambda": float(lam), "pass": "continue", "guess": bid},
            status=status,
            iterations=out.iterations,
            residual=out.final_residual_norm,
        )
        if accepted:
            sweep.record(sweep.branches[bid], index, out.solution, BornBy.CONTINUATION)
            successes.append((bid, out.solution))
        else:
            sweep.branches[bid].end_status = status
            failures.append(bid)
    return successes, failures, deflation


def discovery_pass(sweep, guesses, index, deflation):
    """Seek new branches at grid point ``index`` from each labelled guess.

    Each guess is retried against the growing deflated system until Newton
    fails ``max_consecutive_discovery_failures`` times in a row. Returns
    ``(new_solutions, deflation)`` with new solutions as ``(branch_id, u)``.
    """
    lam = sweep.grid[index]
    cfg, problem = sweep.cfg, sweep.problem
    found = []
    for label, u0 in guesses:
        failures = 0
        while failures < cfg.max_consecutive_discovery_failures:
            out = sweep.solve(lam, u0, deflation)
            accepted = False
            if out.converged:
                deflation, accepted = deflation.deflate(out.solution, cfg.distinctness)
            record = {"lambda": float(lam), "pass": "discover", "guess": label}
            if not accepted:
                failures += 1
                status = out.status.value if not out.converged else "Duplicate"
                sweep.emit(**record, status=status, iterations=out.iterations,
                           residual=out.final_residual_norm)
                continue
            failures = 0
            branch = sweep.new_branch(BornBy.DEFLATION)
            sweep.record(branch, index, out.solution, BornBy.DEFLATION)
            found.append((branch.id, out.solution))
            sweep.emit(**record, status=out.status.value, iterations=out.iterations,
                       residual=out.final_residual_norm, branch=branch.id)
            for action in problem.symmetry_actions:
                image = np.asarray(action(out.solution), dtype=float)
                if problem.residual_norm(problem.residual(image, lam)) > cfg.newton.residual_tolerance:
                    continue
                deflation, accepted = deflation.deflate(image, cfg.distinctness)
                if accepted:
                    twin = sweep.new_branch(BornBy.SYMMETRY)
                    sweep.record(twin, index, image, BornBy.SYMMETRY)
                    found.append((twin.id, image))
                    sweep.emit(**{"lambda": float(lam), "pass": "symmetry", "guess": branch.id},
                               status="Recorded", branch=twin.id)
    return found, deflation


def _discovery_guesses(sweep, current, lam):
    guesses = []
    for bid, u in current:
        if bid == sweep.trivial_id:
            u = sweep.problem.trivial_guess(lam)
            if u is None:
                continue
        guesses.append((bid, u))
    extra = sweep.problem.extra_guesses([u for _, u in current], lam)
    guesses.extend((f"extra{i}", g) for i, g in enumerate(extra))
    return guesses


def backward_completion(diagram, problem, cfg, progress=None):
    """Walk each deflation-born branch back against the sweep direction.

    Plain continuation without deflation, one grid step at a time, until
    Newton fails, the start of the grid is reached, or the walk lands
    within ``cfg.distinctness`` of another branch's solution there.
    """
    sweep = _Sweep(problem, cfg, progress)
    sweep.grid = np.asarray(diagram.lambda_grid)
    by_index = {}
    for b in diagram.branches:
        for i, u in zip(b.indices, b.solutions):
            if u is not None:
                by_index.setdefault(i, []).append((b.id, u))
    for branch in diagram.branches:
        if branch.born_by is not BornBy.DEFLATION:
            continue
        index, u = branch.indices[0], branch.solutions[0]
        if u is None:
            continue
        while index > 0:
            lam = sweep.grid[index - 1]
            out = sweep.solve(lam, u, None)
            record = {"lambda": float(lam), "pass": "backward", "guess": branch.id}
            if not out.converged:
                sweep.emit(**record, status=out.status.value, iterations=out.iterations)
                break
            others = by_index.get(index - 1, [])
            if any(
                norm(out.solution - v, problem.deflation_norm) <= cfg.distinctness
                for bid, v in others
                if bid != branch.id
            ):
                sweep.emit(**record, status="Duplicate", iterations=out.iterations)
                break
            index -= 1
            u = out.solution
            branch.prepend(index, lam, problem.functional(u, lam), BornBy.BACKWARD, u)
            by_index.setdefault(index, []).append((branch.id, u))
            sweep.emit(**record, status=out.status.value, iterations=out.iterations)
    diagram.recount()
    return diagram


def run(problem, cfg, progress=None):
    """Sweep the parameter grid and assemble the bifurcation diagram."""
    sweep = _Sweep(problem, cfg, progress)
    grid = sweep.grid
    state, ubar = trivial_branch_setup(problem, sweep.empty_deflation(), grid[0], cfg.distinctness)
    current = []
    if ubar is not None:
        trivial = sweep.new_branch(BornBy.SEED, trivial=True)
        sweep.trivial_id = trivial.id
        sweep.record(trivial, 0, ubar, BornBy.SEED)
        current.append((trivial.id, ubar))
    for u in problem.seeds(grid[0]):
        state, accepted = state.deflate(u, cfg.distinctness)
        if accepted:
            b = sweep.new_branch(BornBy.SEED)
            sweep.record(b, 0, np.asarray(u, dtype=float), BornBy.SEED)
            current.append((b.id, np.asarray(u, dtype=float)))
    if not current:
        raise ConfigurationError(f"problem {problem.name!r} has no initial solutions at {grid[0]}")

    for index in range(1, len(grid)):
        lam = grid[index]
        state, ubar = trivial_branch_setup(problem, sweep.empty_deflation(), lam, cfg.distinctness)
        following = []
        if ubar is not None:
            sweep.record(sweep.branches[sweep.trivial_id], index, ubar, BornBy.CONTINUATION)
            following.append((sweep.trivial_id, ubar))
        to_continue = [(bid, u) for bid, u in current if bid != sweep.trivial_id]
        successes, _, state = continue_pass(sweep, to_continue, index, state)
        following.extend(successes)
        guesses = _discovery_guesses(sweep, current, lam)
        found, state = discovery_pass(sweep, guesses, index, state)
        following.extend(found)
        current = sorted(following, key=lambda item: item[0])
        sweep.emit(**{"lambda": float(lam), "pass": "summary"}, solutions=len(current),
                   branches=[bid for bid, _ in current])

    diagram = BifurcationDiagram(
        [sweep.branches[i] for i in sorted(sweep.branches)], [float(x) for x in grid], []
    )
    if cfg.backward_pass:
        backward_completion(diagram, problem, cfg, progress)
    diagram.recount()
    for b in diagram.branches:
        b.retain(cfg.retain)
    return diagram

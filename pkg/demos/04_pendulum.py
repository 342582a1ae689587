"""Homotopy from a linear problem to the nonlinear pendulum.

theta'' + eps sin(theta) = 0 on [0, 10] with theta = 2 at both ends. At
eps = 0 the only solution is theta = 2; sweeping eps to 1 tracks it into the
nonlinear problem. Along the way two pairs of solutions are born at folds,
unreachable by following the starting branch, and deflation finds both.
"""

from defcon import BornBy, ContinuationConfig, run
from defcon.problems import Pendulum

diagram = run(Pendulum(), ContinuationConfig(0.0, 1.0, 0.01, retain="none"))

for b in diagram.branches:
    print(f"branch {b.id}: {b.born_by.value:<10} eps {b.lambdas[0]:.2f} .. {b.lambdas[-1]:.2f}"
          f"   functional at eps = 1: {b.functionals[-1]:+9.4f}")

counts = diagram.solution_counts
print(f"\nsolutions at eps = 1: {counts[-1]}")
print(f"fewest solutions at any eps: {min(counts)} (every step is covered)")
born = sorted({b.lambdas[0] for b in diagram.branches if b.born_by is BornBy.DEFLATION})
print(f"new pairs first seen at eps = {born}")

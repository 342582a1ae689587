"""The Mittelmann (generalized Bratu) problem on the unit square.

Two spatially constant solutions exist for lam < 1/e. Nonconstant branches
bifurcate from the upper one where 1 + eig/10 = ybar, with eig a Neumann
eigenvalue of -lap. The first such point is a double eigenvalue, so the sign
of det J does not change there: a det-sign test would sail past it. The
second is simple and the sign does flip.

The full sweep (41 x 41 grid, step -0.001) takes several minutes; the
default here is a 21 x 21 grid over the first part of the sweep.
"""

import argparse

import numpy as np

from defcon import BornBy, ContinuationConfig, det_sign, run
from defcon.problems import Mittelmann, constant_solutions, mittelmann_bifurcation_oracle

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--grid", type=int, default=21, help="nodes per side")
parser.add_argument("--stop", type=float, default=0.2, help="last lambda of the sweep")
args = parser.parse_args()

problem = Mittelmann(args.grid)

print("continuum bifurcation points on the constant branch:")
for m, n in ((0, 0), (0, 1), (1, 1)):
    ybar, lam = mittelmann_bifurcation_oracle(m, n)
    print(f"  mode ({m},{n}): ybar = {ybar:.4f}, lambda = {lam:.4f}")

print("\nsign of det J on the upper constant solution:")
for lam in (0.2824, 0.2624, 0.1619, 0.1419):
    ybar = constant_solutions(lam)[-1]
    s = det_sign(problem.jacobian(np.full(problem.dimension, ybar), lam))
    print(f"  lambda = {lam:.4f}: {s:+d}")

cfg = ContinuationConfig(0.3678, args.stop, -0.001, retain="none")
diagram = run(problem, cfg)
print(f"\nsweep 0.3678 -> {args.stop}: {len(diagram.branches)} branches")
for b in diagram.branches:
    if b.born_by is BornBy.DEFLATION:
        print(f"  branch {b.id} first seen at lambda = {b.lambdas[0]:.4f}, L2 norm {b.functionals[0]:.4f}")

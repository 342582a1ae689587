"""Buckling of the Euler elastica, with and without a transverse load.

With mu = 0 the straight rod theta = 0 solves the problem for every load
lambda, so it is deflated up front, and the reflection theta -> -theta
means each buckled solution comes with a mirror image for free. With
mu = 1/2 the symmetry is gone, the pitchforks unfold into folds, and the
branches that appear are disconnected from the starting one; a backward
pass walks each of them back towards its fold.

The default grid is coarser than the benchmark one so this runs in seconds;
pass --grid 999 for the full resolution.
"""

import argparse
import math

from defcon import BornBy, ContinuationConfig, run
from defcon.problems import Elastica

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--grid", type=int, default=199, help="interior nodes")
args = parser.parse_args()

for mu in (0.0, 0.5):
    cfg = ContinuationConfig(0.0, 4 * math.pi, 0.1, backward_pass=mu != 0.0, retain="none")
    diagram = run(Elastica(mu, args.grid), cfg)
    print(f"\nmu = {mu}: {len(diagram.branches)} branches")
    for b in diagram.branches:
        walked = sum(o is BornBy.BACKWARD for o in b.origins)
        note = f", {walked} points from the backward pass" if walked else ""
        label = "trivial" if b.trivial else b.born_by.value
        print(f"  branch {b.id}: {label:<10} lambda {b.lambdas[0]:5.2f} .. {b.lambdas[-1]:5.2f}"
              f"   functional at end {b.functionals[-1]:+.4f}{note}")
    print(f"  solutions at the last step: {diagram.solution_counts[-1]}")

print("\npitchforks of the undeformed rod sit at lambda = n pi:",
      ", ".join(f"{n * math.pi:.3f}" for n in range(1, 5)))

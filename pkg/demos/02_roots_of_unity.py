"""Roots of z**q = 1 as the real exponent q sweeps from 2 to 9.

For non-integer q the principal branch exp(q Log z) has fewer roots than at
the next integer; a new pair appears whenever q crosses an even integer, on
the negative real axis, disconnected from every branch seen so far. Plain
continuation could never find them; deflation picks them up at once.
"""

import numpy as np

from defcon import BornBy, ContinuationConfig, run
from defcon.problems import RootsOfUnity

diagram = run(RootsOfUnity(), ContinuationConfig(2.0, 9.0, 0.1, retain="all"))

print("branch  born by       first q   arg(z) at birth")
for b in diagram.branches:
    label = "trivial" if b.trivial else b.born_by.value
    print(f"{b.id:>6}  {label:<12}  {b.lambdas[0]:7.1f}   {b.functionals[0]:+.4f}")

print("\n q  solutions  max distance to exp(2 pi i k / q)")
for q in range(2, 10):
    index = diagram.lambda_grid.index(float(q))
    zs = np.array([complex(*u) for _, u in diagram.solutions_at(index)])
    exact = np.exp(2j * np.pi * np.arange(q) / q)
    gap = max(np.min(np.abs(zs - e)) for e in exact)
    print(f"{q:2d}  {len(zs):9d}  {gap:.1e}")

new = [b.lambdas[0] for b in diagram.branches if b.born_by is BornBy.DEFLATION]
print(f"\ndisconnected branches found at q = {new}")

"""Deflation on the smallest possible example: F(u) = u**2 - 1.

Plain Newton from u0 = 0.5 finds +1. Deflating +1 and starting again from
the very same guess finds -1, and the deflated step costs no extra solve:
it is the plain step scaled by a scalar.
"""

import numpy as np

from defcon import BandedMatrix, DeflationState, deflated_step, newton_solve


def F(u):
    return u * u - 1.0


def J(u):
    return BandedMatrix(2.0 * u[None], 0, 0)


u0 = [0.5]
first = newton_solve(F, J, u0)
print(f"plain Newton from 0.5:     {first.solution[0]:+.12f}  ({first.iterations} iterations)")

state, _ = DeflationState().deflate(first.solution)
second = newton_solve(F, J, u0, state)
print(f"deflated Newton from 0.5:  {second.solution[0]:+.12f}  ({second.iterations} iterations)")

state, _ = state.deflate(second.solution)
third = newton_solve(F, J, u0, state)
print(f"both roots deflated:       {third.status.value} after {third.iterations} iterations")

# one step by hand at u = -0.5 with the root +1 deflated
u = np.array([-0.5])
one = DeflationState((np.array([1.0]),))
plain = -J(u).factorize().solve(F(u))[0]
lu = J(u).factorize()
step = deflated_step(lu, F(u), one, u)[0]
print(f"\nat u = -0.5: plain step {plain:+.5f}, deflated step {step:+.5f}, "
      f"scale {step / plain:.5f}, linear solves {lu.solves}")

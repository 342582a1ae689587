"""Complex roots of unity ``z**q = 1`` with a real exponent ``q``."""

import math

import numpy as np

from ..linalg import BandedMatrix
from .base import Problem


def _power(z, q):
    """Principal-branch ``z**q = exp(q Log z)`` for z stored as (re, im)."""
    x, y = float(z[0]), float(z[1])
    if x == 0.0 and y == 0.0:
        raise ValueError("z = 0 is outside the domain of Log")
    w = np.exp(q * complex(math.log(math.hypot(x, y)), math.atan2(y, x)))
    return w, complex(x, y)


class RootsOfUnity(Problem):
    name = "unity"
    dimension = 2

    def residual(self, z, q):
        w, _ = _power(z, q)
        return np.array([w.real - 1.0, w.imag])

    def jacobian(self, z, q):
        w, zc = _power(z, q)
        # complex derivative q z**(q-1) acting on (dx, dy)
        d = q * w / zc
        return BandedMatrix.from_dense([[d.real, -d.imag], [d.imag, d.real]], 1, 1)

    def functional(self, z, q):
        return unity_functional(z)

    def seeds(self, q):
        # principal arguments lie in (-pi, pi]; z = 1 is the trivial branch
        ks = range(math.floor(-q / 2) + 1, math.floor(q / 2) + 1)
        out = []
        for k in ks:
            if k == 0:
                continue
            phase = 2 * math.pi * k / q
            out.append(np.array([math.cos(phase), math.sin(phase)]))
        return out

    def trivial_solution(self, q):
        return np.array([1.0, 0.0])


def unity_residual(z, q):
    return RootsOfUnity().residual(z, q)


def unity_functional(z):
    """Argument of z in (-pi, pi]."""
    return math.atan2(z[1], z[0])

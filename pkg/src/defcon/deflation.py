"""Shifted deflation of known solutions.

Each known root ``r`` contributes the factor ``1/||u - r||**p + shift``;
the deflated residual is the product of all factors times ``F(u)``.
Only the scalar ``m(u)`` and its directional derivative are ever formed.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import EUCLIDEAN, DimensionError, NormKind, inner_many

__all__ = ["DeflationSingularityError", "DeflationState", "DEFAULT_DISTINCTNESS"]

DEFAULT_DISTINCTNESS = 1e-6
# distance at which the deflation factor is treated as infinite
SINGULAR_DISTANCE = 1e-14
# beyond this many roots the factor product is accumulated in log space
LOG_SPACE_ROOTS = 20


class DeflationSingularityError(ArithmeticError):
    """The point sits on a deflated root, where m(u) F(u) is 0/0."""


@dataclass(frozen=True, eq=False)
class DeflationState:
    roots: tuple = ()
    power: float = 2.0
    shift: float = 1.0
    norm_kind: NormKind = field(default=EUCLIDEAN)

    def __post_init__(self):
        if not self.power >= 1:
            raise ValueError(f"deflation power must be >= 1, got {self.power}")
        if not self.shift >= 0:
            raise ValueError(f"deflation shift must be >= 0, got {self.shift}")
        roots = tuple(np.array(r, dtype=float).ravel() for r in self.roots)
        for r in roots:
            r.flags.writeable = False
        if len({r.size for r in roots}) > 1:
            raise DimensionError("deflated roots have different lengths")
        object.__setattr__(self, "roots", roots)
        stack = np.array(roots) if roots else np.zeros((0, 0))
        stack.flags.writeable = False
        object.__setattr__(self, "_stack", stack)

    def __len__(self):
        return len(self.roots)

    def _differences(self, u):
        u = np.asarray(u, dtype=float).ravel()
        if self.roots and u.size != self._stack.shape[1]:
            raise DimensionError(f"length mismatch: {u.size} != {self._stack.shape[1]}")
        return u - self._stack

    def _distances(self, u, diff=None):
        diff = self._differences(u) if diff is None else diff
        dist = np.sqrt(np.maximum(inner_many(diff, diff, self.norm_kind), 0.0))
        if np.any(dist < SINGULAR_DISTANCE):
            raise DeflationSingularityError(f"point lies on deflated root {int(np.argmin(dist))}")
        return dist

    def _factors(self, dist):
        return dist ** (-self.power) + self.shift

    def m_value(self, u):
        """Deflation multiplier m(u); exactly 1 with no roots."""
        if not self.roots:
            return 1.0
        factors = self._factors(self._distances(u))
        if len(factors) > LOG_SPACE_ROOTS:
            return float(np.exp(np.sum(np.log(factors))))
        return float(np.prod(factors))

    def m_directional(self, u, v):
        """Derivative of m at ``u`` in direction ``v``."""
        if not self.roots:
            return 0.0
        return self.m_value(u) * self.log_derivative(u, v)

    def log_derivative(self, u, v):
        """``m'(u)[v] / m(u)``, which stays finite even when m overflows."""
        if not self.roots:
            return 0.0
        u = np.asarray(u, dtype=float).ravel()
        v = np.asarray(v, dtype=float).ravel()
        if v.shape != u.shape:
            raise DimensionError(f"length mismatch: {v.size} != {u.size}")
        diff = self._differences(u)
        dist = self._distances(u, diff)
        slopes = -self.power * dist ** (-self.power - 2) * inner_many(diff, v, self.norm_kind)
        return float(np.sum(slopes / self._factors(dist)))

    def distance_to_nearest(self, u):
        if not self.roots:
            return np.inf
        diff = self._differences(u)
        return float(np.sqrt(max(np.min(inner_many(diff, diff, self.norm_kind)), 0.0)))

    def deflate(self, u_new, distinctness=DEFAULT_DISTINCTNESS):
        """Return ``(state, accepted)``; duplicates leave the state unchanged."""
        if not distinctness > 0:
            raise ValueError("distinctness threshold must be positive")
        u_new = np.asarray(u_new, dtype=float).ravel()
        if self.roots and u_new.size != self.roots[0].size:
            raise DimensionError(f"length mismatch: {u_new.size} != {self.roots[0].size}")
        if self.distance_to_nearest(u_new) <= distinctness:
            return self, False
        return self.with_roots(self.roots + (u_new,)), True

    def with_roots(self, roots):
        return DeflationState(tuple(roots), self.power, self.shift, self.norm_kind)

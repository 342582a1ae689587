"""Vector inner products, discrete norms and banded LU solves.

Vectors are plain 1-D float arrays. Band storage follows the LAPACK
convention: ``bands[ku + i - j, j] == A[i, j]``.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import lapack

__all__ = [
    "NormTag",
    "NormKind",
    "EUCLIDEAN",
    "DimensionError",
    "SingularMatrixError",
    "inner",
    "inner_many",
    "norm",
    "BandedMatrix",
    "BandedLU",
    "banded_lu_solve",
    "det_sign",
]

# pivots below this fraction of the largest band entry count as singular
PIVOT_THRESHOLD = 1e-14


class DimensionError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    """Raised when LU elimination meets a (numerically) zero pivot."""

    def __init__(self, index, message=None):
        self.index = int(index)
        super().__init__(message or f"singular matrix: zero pivot at index {self.index}")


class NormTag(str, Enum):
    EUCLIDEAN = "Euclidean"
    L2 = "L2Discrete"
    H1 = "H1Discrete"


@dataclass(frozen=True)
class NormKind:
    """Selects the inner product used for distances between vectors.

    ``L2`` and ``H1`` read a vector as nodal values on a uniform grid with
    spacing ``mesh_spacing``. ``shape`` gives the (rows, cols) layout for
    2-D grids. With ``zero_boundary`` the vector holds interior nodes only
    and homogeneous Dirichlet values are implied at both ends (1-D only).
    """

    tag: NormTag = NormTag.EUCLIDEAN
    mesh_spacing: float = 1.0
    shape: tuple | None = None
    zero_boundary: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tag", NormTag(self.tag))
        if self.tag is not NormTag.EUCLIDEAN and not self.mesh_spacing > 0:
            raise ValueError("discrete L2/H1 norms need mesh_spacing > 0")
        if self.shape is not None and self.zero_boundary:
            raise ValueError("zero_boundary is only supported on 1-D grids")


EUCLIDEAN = NormKind()


def _trapezoid_weights(n):
    w = np.ones(n)
    if n > 1:
        w[0] = w[-1] = 0.5
    return w


def _inner_1d(X, Y, kind):
    h = kind.mesh_spacing
    if kind.zero_boundary:
        val = h * np.sum(X * Y, axis=-1)
        if kind.tag is NormTag.H1:
            # the implied zero ends contribute the two boundary cells
            ends = X[..., 0] * Y[..., 0] + X[..., -1] * Y[..., -1]
            val = val + (np.sum(np.diff(X) * np.diff(Y), axis=-1) + ends) / h
        return val
    val = h * np.sum(X * Y * _trapezoid_weights(X.shape[-1]), axis=-1)
    if kind.tag is NormTag.H1:
        # exact for piecewise-linear interpolants: h * sum of cell slopes
        val = val + np.sum(np.diff(X) * np.diff(Y), axis=-1) / h
    return val


def _inner_2d(X, Y, kind):
    h = kind.mesh_spacing
    X = X.reshape(X.shape[:-1] + kind.shape)
    Y = Y.reshape(Y.shape[:-1] + kind.shape)
    wr = _trapezoid_weights(kind.shape[0])[:, None]
    wc = _trapezoid_weights(kind.shape[1])[None, :]
    val = h * h * np.sum(X * Y * wr * wc, axis=(-2, -1))
    if kind.tag is NormTag.H1:
        # x-slopes on horizontal edges weighted by the row rule and vice versa
        gx = np.diff(X, axis=-1) * np.diff(Y, axis=-1) * wr
        gy = np.diff(X, axis=-2) * np.diff(Y, axis=-2) * wc
        val = val + np.sum(gx, axis=(-2, -1)) + np.sum(gy, axis=(-2, -1))
    return val


def inner_many(X, Y, kind=EUCLIDEAN):
    """Row-wise inner products; ``X`` and ``Y`` broadcast over leading axes."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape[-1] != Y.shape[-1]:
        raise DimensionError(f"length mismatch: {X.shape[-1]} != {Y.shape[-1]}")
    if kind.tag is NormTag.EUCLIDEAN:
        return np.sum(X * Y, axis=-1)
    if kind.shape is not None:
        if int(np.prod(kind.shape)) != X.shape[-1]:
            raise DimensionError(f"vector of length {X.shape[-1]} does not fit grid {kind.shape}")
        return _inner_2d(X, Y, kind)
    return _inner_1d(X, Y, kind)


def inner(x, y, kind=EUCLIDEAN):
    """Inner product of ``x`` and ``y`` under ``kind``."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise DimensionError(f"length mismatch: {x.size} != {y.size}")
    return float(inner_many(x, y, kind))


def norm(x, kind=EUCLIDEAN):
    x = np.asarray(x, dtype=float).ravel()
    scale = float(np.max(np.abs(x), initial=0.0))
    if scale == 0.0 or not np.isfinite(scale):
        return scale
    # scaling keeps tiny or huge entries from under/overflowing when squared
    y = x / scale
    return scale * float(np.sqrt(max(inner(y, y, kind), 0.0)))


class BandedMatrix:
    """Square matrix with ``kl`` sub- and ``ku`` super-diagonals."""

    def __init__(self, bands, kl, ku):
        bands = np.array(bands, dtype=float)
        if bands.ndim != 2 or bands.shape[0] != kl + ku + 1:
            raise DimensionError(f"band array must have {kl + ku + 1} rows, got shape {bands.shape}")
        n = bands.shape[1]
        if n < 1 or not (0 <= kl < n and 0 <= ku < n):
            raise DimensionError(f"bandwidths kl={kl}, ku={ku} invalid for n={n}")
        self.n = n
        self.kl = int(kl)
        self.ku = int(ku)
        self.bands = bands

    @classmethod
    def zeros(cls, n, kl, ku):
        return cls(np.zeros((kl + ku + 1, n)), kl, ku)

    @classmethod
    def from_dense(cls, A, kl=None, ku=None):
        A = np.asarray(A, dtype=float)
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionError("matrix must be square")
        if kl is None or ku is None:
            rows, cols = np.nonzero(A)
            kl = int(max(rows - cols, default=0)) if kl is None else kl
            ku = int(max(cols - rows, default=0)) if ku is None else ku
            kl, ku = max(kl, 0), max(ku, 0)
        M = cls.zeros(n, kl, ku)
        for d in range(-kl, ku + 1):
            M.set_diagonal(d, np.diagonal(A, d))
        return M

    @classmethod
    def tridiagonal(cls, lower, diag, upper):
        diag = np.asarray(diag, dtype=float)
        M = cls.zeros(diag.size, 1, 1)
        M.set_diagonal(0, diag)
        M.set_diagonal(-1, lower)
        M.set_diagonal(1, upper)
        return M

    def set_diagonal(self, offset, values):
        """Write diagonal ``offset`` (positive = above the main diagonal)."""
        n, row = self.n, self.ku - offset
        if offset >= 0:
            self.bands[row, offset:] = values
        else:
            self.bands[row, : n + offset] = values

    def to_dense(self):
        A = np.zeros((self.n, self.n))
        for d in range(-self.kl, self.ku + 1):
            row = self.ku - d
            if d >= 0:
                A += np.diag(self.bands[row, d:], d)
            else:
                A += np.diag(self.bands[row, : self.n + d], d)
        return A

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DimensionError(f"length mismatch: {x.size} != {self.n}")
        y = np.zeros(self.n)
        for d in range(-self.kl, self.ku + 1):
            row = self.ku - d
            if d >= 0:
                y[: self.n - d] += self.bands[row, d:] * x[d:]
            else:
                y[-d:] += self.bands[row, : self.n + d] * x[: self.n + d]
        return y

    __matmul__ = matvec

    def factorize(self):
        return BandedLU(self)


class BandedLU:
    """LU factors of a :class:`BandedMatrix` with partial pivoting.

    Row interchanges fill the upper triangle out to ``kl + ku``
    super-diagonals, which LAPACK's extended band layout reserves.
    ``solves`` counts calls to :meth:`solve`.
    """

    def __init__(self, A):
        self.n, self.kl, self.ku = A.n, A.kl, A.ku
        kl, ku = self.kl, self.ku
        work = np.zeros((2 * kl + ku + 1, self.n))
        work[kl:] = A.bands
        scale = float(np.max(np.abs(A.bands), initial=0.0))
        lu, ipiv, info = lapack.dgbtrf(work, kl, ku)
        if info < 0:
            raise ValueError(f"dgbtrf: illegal argument {-info}")
        pivots = lu[kl + ku]
        small = np.flatnonzero(~(np.abs(pivots) > PIVOT_THRESHOLD * scale))
        if info > 0 or small.size:
            index = info - 1 if info > 0 else small[0]
            raise SingularMatrixError(index)
        self._lu = lu
        self._ipiv = ipiv
        self.solves = 0

    def solve(self, b):
        b = np.asarray(b, dtype=float)
        if b.shape != (self.n,):
            raise DimensionError(f"length mismatch: {b.size} != {self.n}")
        x, info = lapack.dgbtrs(self._lu, self.kl, self.ku, b, self._ipiv)
        if info != 0:
            raise ValueError(f"dgbtrs: illegal argument {-info}")
        self.solves += 1
        return x

    def det_sign(self):
        pivots = self._lu[self.kl + self.ku]
        swaps = np.count_nonzero(self._ipiv != np.arange(self.n))
        negatives = np.count_nonzero(pivots < 0)
        return -1 if (swaps + negatives) % 2 else 1


def banded_lu_solve(A, b):
    return A.factorize().solve(b)


def det_sign(A):
    """Sign of det(A) from the pivoted LU factors; 0 if A is singular."""
    try:
        return A.factorize().det_sign()
    except SingularMatrixError:
        return 0

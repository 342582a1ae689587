import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from defcon.linalg import (
    EUCLIDEAN,
    BandedMatrix,
    DimensionError,
    NormKind,
    NormTag,
    SingularMatrixError,
    banded_lu_solve,
    det_sign,
    inner,
    norm,
)


def dense_gauss_solve(A, b):
    """Textbook Gaussian elimination with partial pivoting (independent of LAPACK)."""
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    n = len(b)
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        A[[k, p]] = A[[p, k]]
        b[[k, p]] = b[[p, k]]
        for i in range(k + 1, n):
            f = A[i, k] / A[k, k]
            A[i, k:] -= f * A[k, k:]
            b[i] -= f * b[k]
    x = np.zeros(n)
    for i in reversed(range(n)):
        x[i] = (b[i] - A[i, i + 1 :] @ x[i + 1 :]) / A[i, i]
    return x


def random_banded(rng, n, kl, ku, dominant=True):
    A = np.zeros((n, n))
    for d in range(-kl, ku + 1):
        A += np.diag(rng.uniform(-1, 1, n - abs(d)), d)
    if dominant:
        A += np.diag(np.sign(rng.uniform(-1, 1, n)) * (kl + ku + 1))
    return A


# -- inner products and norms -------------------------------------------------

def test_inner_orthogonal_axes():
    assert inner([1, 0], [0, 1], EUCLIDEAN) == 0.0


def test_inner_constant_l2():
    x = np.full(11, 2.0)
    assert inner(x, x, NormKind(NormTag.L2, 0.1)) == pytest.approx(4.0, abs=1e-14)


def test_inner_linear_h1():
    s = np.linspace(0.0, 1.0, 11)
    # trapezoid of s^2 on 11 nodes: 0.1 * (sum s_i^2 - 0.5) = 0.335, plus 1 for the slope
    trap = 0.1 * (np.sum(s**2) - 0.5)
    assert trap == pytest.approx(0.335, abs=1e-14)
    assert inner(s, s, NormKind(NormTag.H1, 0.1)) == pytest.approx(1.335, abs=1e-13)


def test_norm_examples():
    assert norm([3, 4]) == 5.0
    for kind in (EUCLIDEAN, NormKind(NormTag.L2, 0.1), NormKind(NormTag.H1, 0.1)):
        assert norm(np.zeros(11), kind) == 0.0
    assert norm(np.full(11, 2.0), NormKind(NormTag.L2, 0.1)) == pytest.approx(2.0, abs=1e-14)


def test_inner_length_mismatch():
    with pytest.raises(DimensionError):
        inner([1, 2], [1, 2, 3])


def test_norm_kind_needs_spacing():
    with pytest.raises(ValueError):
        NormKind(NormTag.H1, 0.0)
    with pytest.raises(ValueError):
        NormKind(NormTag.L2, -1.0)
    NormKind(NormTag.EUCLIDEAN, 0.0)


def test_zero_boundary_matches_padded_vector():
    rng = np.random.default_rng(0)
    x, y = rng.normal(size=9), rng.normal(size=9)
    pad = lambda v: np.concatenate(([0.0], v, [0.0]))  # noqa: E731
    for tag in (NormTag.L2, NormTag.H1):
        full = inner(pad(x), pad(y), NormKind(tag, 0.1))
        interior = inner(x, y, NormKind(tag, 0.1, zero_boundary=True))
        assert interior == pytest.approx(full, rel=1e-13)


def test_2d_inner_is_tensor_trapezoid():
    n, h = 6, 0.2
    X, Y = np.meshgrid(np.linspace(0, 1, n), np.linspace(0, 1, n))
    # bilinear x*y is integrated exactly by the tensor trapezoid rule: 1/9
    f = (X * Y).ravel()
    assert inner(f, f, NormKind(NormTag.L2, h, shape=(n, n))) == pytest.approx(
        h * h * np.sum(np.outer(w := np.r_[0.5, np.ones(n - 2), 0.5], w) * (X * Y) ** 2), rel=1e-14
    )
    # gradient of x + y is (1, 1): H1 adds |grad|^2 * area = 2 exactly
    g = (X + Y).ravel()
    kind1 = NormKind(NormTag.H1, h, shape=(n, n))
    kind0 = NormKind(NormTag.L2, h, shape=(n, n))
    assert inner(g, g, kind1) - inner(g, g, kind0) == pytest.approx(2.0, rel=1e-13)


finite = st.floats(-1e3, 1e3, allow_nan=False)
vectors = arrays(np.float64, 12, elements=finite)
kinds = st.sampled_from(
    [EUCLIDEAN, NormKind(NormTag.L2, 0.1), NormKind(NormTag.H1, 0.1),
     NormKind(NormTag.H1, 0.05, zero_boundary=True), NormKind(NormTag.H1, 0.2, shape=(3, 4))]
)


@settings(max_examples=200, deadline=None)
@given(vectors, vectors, vectors, kinds)
def test_norm_properties(x, y, z, kind):
    assert norm(x, kind) >= 0.0
    assert (norm(x, kind) == 0.0) == (not np.any(x))
    assert inner(x, y, kind) == pytest.approx(inner(y, x, kind), rel=1e-12, abs=1e-9)
    # triangle inequality on random triples
    scale = norm(x - y, kind) + norm(y - z, kind)
    assert norm(x - z, kind) <= scale + 1e-12 * max(1.0, scale)


# -- banded LU -----------------------------------------------------------------

def test_identity_solve():
    b = np.array([3.0, -1.0, 7.5, 0.25])
    I = BandedMatrix(np.ones((1, 4)), 0, 0)
    np.testing.assert_array_equal(banded_lu_solve(I, b), b)


def test_tridiagonal_example():
    A = BandedMatrix.tridiagonal([-1, -1], [2, 2, 2], [-1, -1])
    np.testing.assert_allclose(banded_lu_solve(A, [1, 1, 1]), [1.5, 2.0, 1.5], rtol=1e-14)
    np.testing.assert_allclose(
        banded_lu_solve(A, [1, 1, 1]), dense_gauss_solve(A.to_dense(), [1, 1, 1]), rtol=1e-14
    )


def test_zero_column_is_singular():
    A = np.array([[1.0, 0.0, 2.0], [3.0, 0.0, 1.0], [0.0, 0.0, 5.0]])
    with pytest.raises(SingularMatrixError) as info:
        BandedMatrix.from_dense(A, 2, 2).factorize()
    assert info.value.index == 1


def test_relative_pivot_threshold():
    A = np.diag([1.0, 1e-15, 1.0])
    with pytest.raises(SingularMatrixError):
        banded_lu_solve(BandedMatrix.from_dense(A, 0, 0), np.ones(3))


def test_bandwidth_validation():
    with pytest.raises(DimensionError):
        BandedMatrix(np.zeros((3, 2)), 1, 2)
    with pytest.raises(DimensionError):
        BandedMatrix(np.zeros((2, 3)), 1, 1)


def test_solve_repeatable_bitwise():
    rng = np.random.default_rng(3)
    A = BandedMatrix.from_dense(random_banded(rng, 30, 2, 3), 2, 3)
    lu = A.factorize()
    b = rng.normal(size=30)
    assert np.array_equal(lu.solve(b), lu.solve(b.copy()))
    assert lu.solves == 2


def test_matvec_and_dense_roundtrip():
    rng = np.random.default_rng(4)
    D = random_banded(rng, 12, 3, 1)
    A = BandedMatrix.from_dense(D)
    assert (A.kl, A.ku) == (3, 1)
    np.testing.assert_array_equal(A.to_dense(), D)
    x = rng.normal(size=12)
    np.testing.assert_allclose(A @ x, D @ x, rtol=1e-14, atol=1e-14)


@pytest.mark.parametrize("seed", range(40))
def test_banded_solve_matches_dense_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 51))
    kl = int(rng.integers(0, min(n, 6)))
    ku = int(rng.integers(0, min(n, 6)))
    # not diagonally dominant half the time, so pivoting actually happens
    D = random_banded(rng, n, kl, ku, dominant=bool(seed % 2))
    if abs(np.linalg.det(D)) < 1e-6 or np.linalg.cond(D) > 1e8:
        D += np.eye(n) * (kl + ku + 1)
    b = rng.normal(size=n)
    x = banded_lu_solve(BandedMatrix.from_dense(D, kl, ku), b)
    ref = dense_gauss_solve(D, b)
    assert np.linalg.norm(x - ref) <= 1e-10 * np.linalg.norm(ref)
    assert np.max(np.abs(D @ x - b)) <= 1e-10 * (1 + np.max(np.abs(b)))


def test_det_sign_examples():
    assert det_sign(BandedMatrix(np.ones((1, 4)), 0, 0)) == 1
    assert det_sign(BandedMatrix(np.array([[-1.0, 1.0, 1.0]]), 0, 0)) == -1
    assert det_sign(BandedMatrix(np.array([[1.0, 0.0, 1.0]]), 0, 0)) == 0


def dense_det(A):
    """Cofactor expansion: slow but independent of any factorization."""
    n = len(A)
    if n == 1:
        return A[0, 0]
    return sum(
        (-1) ** j * A[0, j] * dense_det(np.delete(A[1:], j, axis=1)) for j in range(n) if A[0, j]
    )


@pytest.mark.parametrize("seed", range(60))
def test_det_sign_matches_dense_determinant(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(1, 9))
    kl = int(rng.integers(0, n))
    ku = int(rng.integers(0, n))
    D = random_banded(rng, n, kl, ku, dominant=False)
    d = dense_det(D)
    if abs(d) < 1e-8:
        pytest.skip("nearly singular draw")
    assert det_sign(BandedMatrix.from_dense(D, kl, ku)) == int(np.sign(d))

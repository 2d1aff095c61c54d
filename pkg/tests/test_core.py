import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionkit.core import (
    CoefficientBundle,
    OperatorMatrix,
    Subspace,
    Tolerances,
    bundle_inner,
    bundle_norm,
    intersection_dim,
    operator_norm,
    orthonormalize,
    projector,
    random_bundle,
)
from fusionkit.errors import (
    DimensionMismatch,
    ShapeMismatch,
    SingularOperator,
    ZeroSubspace,
)

EYE3 = np.eye(3)


def test_orthonormalize_keeps_orthonormal_input():
    w = orthonormalize(np.eye(3))
    assert w.dim == 3
    np.testing.assert_array_equal(w.basis, np.eye(3))


def test_orthonormalize_single_column():
    w = orthonormalize(np.array([1.0, 1.0]))
    np.testing.assert_allclose(w.basis[:, 0], np.array([1, 1]) / np.sqrt(2), atol=1e-15)


def test_orthonormalize_rank_deficient():
    raw = np.array([[1.0, 2.0], [1.0, 2.0]])
    # oracle: numerical rank from the singular values of the raw input
    s = np.linalg.svd(raw, compute_uv=False)
    assert np.count_nonzero(s > 1e-10 * s[0]) == 1
    w = orthonormalize(raw)
    assert w.dim == 1
    np.testing.assert_allclose(w.basis[:, 0], np.array([1, 1]) / np.sqrt(2), atol=1e-15)


def test_orthonormalize_zero_raises():
    with pytest.raises(ZeroSubspace):
        orthonormalize(np.zeros((3, 2)))
    with pytest.raises(ZeroSubspace):
        orthonormalize(np.full((2, 1), 1e-14))


def test_subspace_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        Subspace(np.array([[1.0], [1.0]]))
    with pytest.raises(ShapeMismatch):
        Subspace(np.ones((2, 3)) / 2)


def test_subspace_is_immutable():
    w = orthonormalize(np.eye(2))
    with pytest.raises(ValueError):
        w.basis[0, 0] = 5


def test_projector_examples():
    np.testing.assert_allclose(projector(orthonormalize(np.array([1.0, 0.0]))), np.diag([1, 0]))
    np.testing.assert_allclose(
        projector(orthonormalize(np.array([1.0, 1.0]) / np.sqrt(2))),
        0.5 * np.ones((2, 2)),
        atol=1e-15,
    )


@pytest.mark.parametrize("seed", range(10))
def test_projector_hermitian_idempotent(seed):
    rng = np.random.default_rng(seed)
    n, k = 6, 1 + seed % 5
    w = orthonormalize(rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k)))
    p = projector(w)
    tol = Tolerances()
    assert operator_norm(w.basis.conj().T @ w.basis - np.eye(k)) <= tol.ortho_tol
    assert operator_norm(p.conj().T - p) <= tol.eq_tol
    assert operator_norm(p @ p - p) <= tol.eq_tol


@pytest.mark.parametrize("seed", range(10))
def test_orthonormalize_preserves_span(seed):
    rng = np.random.default_rng(100 + seed)
    raw = rng.standard_normal((7, 3)) @ rng.standard_normal((3, 5))  # rank 3, 5 columns
    w = orthonormalize(raw)
    assert w.dim == 3
    assert np.linalg.norm(projector(w) @ raw - raw) <= 1e-8 * np.linalg.norm(raw)


def test_intersection_dim_examples():
    w = orthonormalize(EYE3[:, :2])
    v = orthonormalize(EYE3[:, 1:])
    # oracle: the 3x4 concatenation has rank 3
    assert np.linalg.matrix_rank(np.hstack([EYE3[:, :2], EYE3[:, 1:]])) == 3
    assert intersection_dim(w, v) == 1
    assert intersection_dim(orthonormalize(EYE3[:2, 0]), orthonormalize(EYE3[:2, 1])) == 0
    assert intersection_dim(w, w) == 2


def test_intersection_dim_mismatch():
    with pytest.raises(DimensionMismatch):
        intersection_dim(orthonormalize(np.eye(2)), orthonormalize(np.eye(3)))


@pytest.mark.parametrize("seed", range(8))
def test_intersection_dim_symmetric_and_bounded(seed):
    rng = np.random.default_rng(seed)
    shared = rng.standard_normal((6, seed % 3))
    w = orthonormalize(np.hstack([shared, rng.standard_normal((6, 2))]))
    v = orthonormalize(np.hstack([shared, rng.standard_normal((6, 1))]))
    d = intersection_dim(w, v)
    assert d == intersection_dim(v, w) == seed % 3
    assert d <= min(w.dim, v.dim)


def test_operator_norm_examples():
    assert operator_norm(np.eye(4)) == pytest.approx(1.0)
    assert operator_norm(np.diag([2.0, 1.0])) == pytest.approx(2.0)
    a = np.array([[1.0, -1.0], [0.0, 0.0]])
    # oracle: sqrt of the top eigenvalue of A^H A
    oracle = np.sqrt(np.linalg.eigvalsh(a.T @ a)[-1])
    assert oracle == pytest.approx(np.sqrt(2), abs=1e-15)
    assert operator_norm(a) == pytest.approx(oracle, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_operator_norm_submultiplicative(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    assert operator_norm(a @ b) <= operator_norm(a) * operator_norm(b) * (1 + 1e-12)


def test_operator_matrix_tags():
    assert OperatorMatrix.verify(np.eye(3)).tag == "unitary-verified"
    assert OperatorMatrix.verify(np.diag([2.0, 1.0])).tag == "invertible-verified"
    assert OperatorMatrix.verify(np.diag([1.0, 0.0])).tag == "general"
    with pytest.raises(SingularOperator):
        OperatorMatrix(np.diag([1.0, 0.0]), "invertible-verified")
    op = OperatorMatrix.verify(np.diag([4.0, 0.5]))
    assert op.norm == pytest.approx(4.0)
    assert op.inverse_norm == pytest.approx(2.0)


def test_bundle_norm_examples():
    subs = [orthonormalize(np.eye(4)[:, :2]), orthonormalize(np.eye(4)[:, 2:])]
    assert bundle_norm(CoefficientBundle.zeros(subs)) == 0.0
    b = CoefficientBundle((np.array([3.0, 0.0]), np.array([0.0, 4.0])))
    assert bundle_norm(b) == pytest.approx(5.0)


def test_bundle_inner_matches_norm():
    rng = np.random.default_rng(7)
    subs = [orthonormalize(rng.standard_normal((5, k))) for k in (1, 2, 3)]
    for _ in range(100):
        b = random_bundle(subs, rng)
        # direct summation oracle over the ambient vectors
        direct = sum(np.vdot(g, g) for g in b.vectors(subs))
        assert bundle_inner(b, b) == pytest.approx(direct, rel=1e-12)
        assert bundle_inner(b, b).real == pytest.approx(bundle_norm(b) ** 2, rel=1e-12)


def test_bundle_inner_linear_in_first_argument():
    a = CoefficientBundle((np.array([1.0]),))
    b = CoefficientBundle((np.array([1.0]),))
    scaled = CoefficientBundle((np.array([2j]),))
    assert bundle_inner(scaled, b) == pytest.approx(2j * bundle_inner(a, b))


def test_bundle_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        bundle_inner(CoefficientBundle((np.ones(2),)), CoefficientBundle((np.ones(3),)))
    subs = [orthonormalize(np.eye(3)[:, :1])]
    with pytest.raises(ShapeMismatch):
        CoefficientBundle((np.ones(2),)).total(subs)


def test_tolerances_must_be_positive():
    with pytest.raises(ValueError):
        Tolerances(eq_tol=0.0)
    with pytest.raises(ValueError):
        Tolerances(rank_tol=-1e-3)

import numpy as np
import pytest

from fusionkit import generators as gen
from fusionkit.basis import BiorthogonalFamily, biorthogonal_family, f_dual, is_f_basis, subset_masks
from fusionkit.core import operator_norm, orthonormalize, projector
from fusionkit.errors import DimMismatchPerMember, NotBiorthogonal, ShapeMismatch, TooManyMembers
from fusionkit.frame import FusionSystem
from fusionkit.perturbation import (
    biorthogonal_perturbation,
    paley_wiener_global,
    paley_wiener_subsetwise,
    perturbation_operator,
    subsetwise_lambdas,
)

from conftest import lines

EYE3 = np.eye(3)


def brute_lambdas(fd, v):
    out = []
    eye = np.eye(fd.ambient_dim)
    for members in subset_masks(fd.m):
        span = orthonormalize(np.hstack([fd.subspaces[j].basis for j in members]))
        k = sum((eye - projector(v.subspaces[j])) @ fd.projectors[j] for j in members)
        out.append(operator_norm(k @ projector(span)))
    return np.array(out)


@pytest.mark.parametrize("theta", [0.1, 0.2, 0.3])
def test_closed_form_coordinate_lines(coord_lines_2, theta):
    v = gen.rotate(coord_lines_2, theta, seed=0)
    rep = paley_wiener_global(f_dual(coord_lines_2), v)
    assert rep.lambda_global == pytest.approx(np.sin(theta), abs=1e-9)
    assert rep.conclusive and rep.verdict and rep.cross_check
    sub = paley_wiener_subsetwise(f_dual(coord_lines_2), v)
    assert sub.lambda_subsetwise == pytest.approx(np.sin(theta), abs=1e-9)
    assert sub.lambda_singletons == pytest.approx(np.sin(theta), abs=1e-9)


def test_swap_is_inconclusive(coord_lines_2):
    v = gen.rotate(coord_lines_2, np.pi / 2, seed=0)
    rep = paley_wiener_global(f_dual(coord_lines_2), v)
    assert rep.lambda_global == pytest.approx(1.0, abs=1e-9)
    assert not rep.conclusive and rep.verdict is None
    assert is_f_basis(v)


def test_identity_perturbation_is_zero(sys_b, sys_b_dual):
    assert operator_norm(perturbation_operator(sys_b_dual, sys_b)) <= 1e-14
    rep = paley_wiener_subsetwise(sys_b_dual, sys_b)
    assert rep.lambda_subsetwise <= 1e-7 and rep.verdict


@pytest.mark.parametrize("seed", range(12))
def test_subset_lambdas_brute_force(seed):
    w = gen.random_riesz(6, [2, 1, 2, 1], cond=3.0, seed=seed)
    v = gen.rotate(w, 0.2, seed=seed, mode="independent")
    fd = f_dual(w)
    np.testing.assert_allclose(subsetwise_lambdas(fd, v), brute_lambdas(fd, v), rtol=1e-7, atol=1e-9)


@pytest.mark.parametrize("seed", range(12))
def test_subsetwise_dominates_global_and_singletons(seed):
    w = gen.random_riesz(5, [1, 2, 2], cond=4.0, seed=seed)
    v = gen.rotate(w, 0.15, seed=seed, mode="independent")
    rep = paley_wiener_subsetwise(f_dual(w), v)
    # the full index set recovers the global operator norm
    assert subsetwise_lambdas(f_dual(w), v)[-1] == pytest.approx(rep.lambda_global, rel=1e-7)
    assert rep.lambda_subsetwise >= rep.lambda_global - 1e-9
    assert rep.lambda_subsetwise >= rep.lambda_singletons - 1e-12
    assert rep.lambda_used == rep.lambda_subsetwise


@pytest.mark.parametrize("seed", range(30))
def test_soundness_independent_rotations(seed):
    rng = np.random.default_rng(seed)
    w = gen.random_riesz(4, [1, 2, 1], cond=2.0, seed=seed)
    v = gen.rotate(w, float(rng.uniform(0, 0.3)), seed=seed, mode="independent")
    for rep in (paley_wiener_global(f_dual(w), v), paley_wiener_subsetwise(f_dual(w), v)):
        if rep.conclusive and rep.verdict:
            assert is_f_basis(v)


def test_pairing_checks(sys_b_dual):
    with pytest.raises(ShapeMismatch):
        paley_wiener_global(sys_b_dual, lines([1, 0]))
    fd = f_dual(FusionSystem.from_spanning_sets([EYE3[:, :2], EYE3[:, 2]]))
    with pytest.raises(DimMismatchPerMember):
        paley_wiener_global(fd, FusionSystem.from_spanning_sets([EYE3[:, 0], EYE3[:, 1:]]))


def test_subsetwise_cap():
    fd = f_dual(gen.example_2_3(4))
    with pytest.raises(TooManyMembers):
        paley_wiener_subsetwise(fd, fd.system, max_members=3)


def test_biorthogonal_self_is_zero(sys_b, sys_b_dual):
    rep = biorthogonal_perturbation(sys_b_dual, biorthogonal_family(sys_b))
    assert rep.lambda_subsetwise <= 1e-12 and rep.verdict


def test_biorthogonal_kernel_violation():
    w = FusionSystem.from_spanning_sets([EYE3[:, 0], EYE3[:, 1:]])
    vs = (orthonormalize(EYE3[:, 0]), orthonormalize(EYE3[:, 1]))
    q1 = np.outer(EYE3[:, 0], EYE3[:, 0]) + np.outer(EYE3[:, 0], EYE3[:, 2])
    q2 = np.outer(EYE3[:, 1], EYE3[:, 1])
    fam = BiorthogonalFamily((q1, q2), False, vs)
    rep = biorthogonal_perturbation(f_dual(w), fam)
    assert not rep.conclusive and rep.lambda_subsetwise is None
    assert (0,) in rep.kernel_violations


def test_biorthogonal_rejects_bad_family(sys_b, sys_b_dual):
    fam = BiorthogonalFamily((np.eye(2), np.eye(2)), False, sys_b.subspaces)
    with pytest.raises(NotBiorthogonal):
        biorthogonal_perturbation(sys_b_dual, fam)


def test_biorthogonal_rotation_literal_is_inconclusive(coord_lines_2):
    # Q_1 does not vanish on W_2, so f = e2 gives B f = 0 but A f != 0
    v = gen.rotate(coord_lines_2, 0.1)
    rep = biorthogonal_perturbation(f_dual(coord_lines_2), biorthogonal_family(v))
    assert not rep.conclusive and rep.kernel_violations == ((0,), (1,))


def test_biorthogonal_rotation_components(coord_lines_2):
    theta = 0.1
    v = gen.rotate(coord_lines_2, theta)
    rep = biorthogonal_perturbation(f_dual(coord_lines_2), biorthogonal_family(v), pairing="components")
    assert rep.conclusive and rep.verdict and rep.cross_check
    # oracle: Q_j = R pi_j R^T, so every A_F has norm |1 - cos(t) e^{it}| = sin t
    assert rep.lambda_subsetwise == pytest.approx(np.sin(theta), abs=1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_biorthogonal_components_sound(seed):
    w = gen.random_riesz(5, [2, 1, 2], cond=2.0, seed=seed)
    v = gen.rotate(w, 0.05, seed=seed, mode="independent")
    rep = biorthogonal_perturbation(f_dual(w), biorthogonal_family(v), pairing="components")
    assert rep.lambda_subsetwise is not None and not rep.kernel_violations
    if rep.conclusive:
        assert is_f_basis(v)


def test_biorthogonal_unknown_pairing(sys_b, sys_b_dual):
    with pytest.raises(ValueError):
        biorthogonal_perturbation(sys_b_dual, biorthogonal_family(sys_b), pairing="other")


def test_report_as_dict(coord_lines_2):
    d = paley_wiener_global(f_dual(coord_lines_2), gen.rotate(coord_lines_2, 0.1)).as_dict()
    assert d["method"] == "global_operator" and d["verdict"] is True
    assert d["lambda_subsetwise"] is None and d["kernel_violations"] == []


@pytest.mark.parametrize("seed", range(6))
def test_lambda_monotone_in_angle(seed):
    w = gen.random_riesz(4, [1, 2, 1], cond=2.0, seed=seed)
    fd = f_dual(w)
    thetas = np.arange(0.05, 1.5001, 0.05)
    lams = [paley_wiener_global(fd, gen.rotate(w, t, seed=seed)).lambda_global for t in thetas]
    assert np.all(np.diff(lams) >= -1e-9)

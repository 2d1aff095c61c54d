"""Paley-Wiener type stability certificates for fusion bases.

Given a fusion basis ``{W_j}`` with component projections ``P_j`` and a
candidate family ``{V_j}``, the perturbation operator

    K = sum_j (I - pi_{V_j}) P_j

sends ``f = sum g_j`` to ``sum (g_j - pi_{V_j} g_j)``. If ``||K|| < 1`` then
``I - K = sum_j pi_{V_j} P_j`` is invertible and maps each ``W_j`` onto
``V_j`` (dimensions are required to match member by member), so ``{V_j}``
is a fusion basis. The converse fails, so a constant ``>= 1`` is reported as
inconclusive, never as a refutation.

The pairing of ``g_j`` with ``f_j = pi_{V_j} g_j`` is the operative reading
of the hypothesis: for unrelated ``f_j`` the left-hand side is unbounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _backend
from .basis import (
    BiorthogonalFamily,
    FDualSystem,
    as_fdual,
    biorthogonality_residual,
    is_f_basis,
    subset_masks,
)
from .core import DEFAULT_TOL, operator_norm, projector
from .errors import (
    DimensionMismatch,
    DimMismatchPerMember,
    InternalConsistencyError,
    NotBiorthogonal,
    ShapeMismatch,
    TooManyMembers,
)
from .frame import FusionSystem

__all__ = [
    "PerturbationReport",
    "perturbation_operator",
    "paley_wiener_global",
    "paley_wiener_subsetwise",
    "subsetwise_lambdas",
    "biorthogonal_perturbation",
]


@dataclass(frozen=True)
class PerturbationReport:
    lambda_global: float
    method: str  # "global_operator" or "subset_exhaustive"
    conclusive: bool
    verdict: Optional[bool] = None
    lambda_subsetwise: Optional[float] = None
    lambda_singletons: Optional[float] = None
    worst_subset: tuple = ()
    cross_check: Optional[bool] = None
    kernel_violations: tuple = field(default=())

    @property
    def lambda_used(self):
        if self.method == "subset_exhaustive":
            return self.lambda_subsetwise
        return self.lambda_global

    def as_dict(self):
        return {
            "method": self.method,
            "lambda_global": self.lambda_global,
            "lambda_subsetwise": self.lambda_subsetwise,
            "lambda_singletons": self.lambda_singletons,
            "worst_subset": list(self.worst_subset),
            "conclusive": self.conclusive,
            "verdict": self.verdict,
            "cross_check_f_basis": self.cross_check,
            "kernel_violations": [list(f) for f in self.kernel_violations],
        }


def _candidate_subspaces(v):
    if isinstance(v, (FusionSystem, FDualSystem)):
        return tuple(v.subspaces)
    return tuple(v)


def _check_pairing(w: FDualSystem, vs):
    if len(vs) != w.m:
        raise ShapeMismatch(f"{len(vs)} candidate members for {w.m} basis members")
    for j, (ws, vj) in enumerate(zip(w.subspaces, vs)):
        if vj.ambient_dim != w.ambient_dim:
            raise DimensionMismatch(f"candidate {j} lives in C^{vj.ambient_dim}")
        if vj.dim != ws.dim:
            raise DimMismatchPerMember(f"member {j}: dim V = {vj.dim} but dim W = {ws.dim}")


def _conclude(lam, candidates, tol):
    """Verdict from a constant, cross-checked against the direct test."""
    if not lam < 1.0 - tol.eq_tol:
        return False, None, None
    cross = bool(is_f_basis(FusionSystem.from_subspaces(candidates), tol))
    if not cross:
        raise InternalConsistencyError(
            f"certificate constant {lam:.6g} < 1 but the candidate family is not a fusion basis"
        )
    return True, True, cross


def perturbation_operator(w, v, tol=DEFAULT_TOL) -> np.ndarray:
    """``K = sum_j (I - pi_{V_j}) P_j``."""
    w = as_fdual(w, tol)
    vs = _candidate_subspaces(v)
    _check_pairing(w, vs)
    n = w.ambient_dim
    eye = np.eye(n)
    return sum((eye - projector(vj)) @ p for vj, p in zip(vs, w.projectors))


def paley_wiener_global(w, v, tol=DEFAULT_TOL) -> PerturbationReport:
    """Single operator-norm certificate ``lambda = ||K||``.

    Raises
    ------
    ShapeMismatch, DimMismatchPerMember
    InternalConsistencyError
        If the certificate says yes but the direct fusion-basis test says no.
    """
    w = as_fdual(w, tol)
    vs = _candidate_subspaces(v)
    lam = operator_norm(perturbation_operator(w, vs, tol))
    conclusive, verdict, cross = _conclude(lam, vs, tol)
    return PerturbationReport(lam, "global_operator", conclusive, verdict, cross_check=cross)


def subsetwise_lambdas(w, v, tol=DEFAULT_TOL) -> np.ndarray:
    """``lambda_F`` for every nonempty subset, indexed by ``mask - 1``.

    ``lambda_F`` is the sup of ``||sum_F (g_j - pi_{V_j} g_j)|| / ||sum_F g_j||``.
    With ``C = [(I - pi_{V_j}) basis_j]_j`` and ``D = [basis_j]_j`` this is the
    largest generalized eigenvalue of the principal ``F`` blocks of
    ``(C^H C, D^H D)``, square-rooted.
    """
    w = as_fdual(w, tol)
    vs = _candidate_subspaces(v)
    _check_pairing(w, vs)
    n = w.ambient_dim
    eye = np.eye(n)
    c = np.hstack([(eye - projector(vj)) @ wj.basis for vj, wj in zip(vs, w.subspaces)])
    d = np.asarray(w.stacked)
    a = c.conj().T @ c
    b = d.conj().T @ d
    a = np.ascontiguousarray((a + a.conj().T) / 2)
    b = np.ascontiguousarray((b + b.conj().T) / 2)
    offsets = np.asarray(w.system.offsets, dtype=np.intp)
    sizes = np.asarray(w.system.dims, dtype=np.intp)
    mu = _backend.subset_eigmax(a, b, offsets, sizes, 1)
    return np.sqrt(np.clip(mu, 0.0, None))


def paley_wiener_subsetwise(w, v, max_members=12, tol=DEFAULT_TOL) -> PerturbationReport:
    """Exhaustive subset certificate ``lambda = max_F lambda_F``.

    Raises
    ------
    TooManyMembers
        If the member count exceeds ``max_members``.
    """
    w = as_fdual(w, tol)
    vs = _candidate_subspaces(v)
    if w.m > max_members:
        raise TooManyMembers(f"{w.m} members exceeds the exhaustive cap of {max_members}")
    lams = subsetwise_lambdas(w, vs, tol)
    masks = subset_masks(w.m)
    worst = int(np.argmax(lams))
    singles = max(float(lams[(1 << j) - 1]) for j in range(w.m))
    lam = float(lams[worst])
    lam_global = operator_norm(perturbation_operator(w, vs, tol))
    conclusive, verdict, cross = _conclude(lam, vs, tol)
    return PerturbationReport(
        lam_global,
        "subset_exhaustive",
        conclusive,
        verdict,
        lambda_subsetwise=lam,
        lambda_singletons=singles,
        worst_subset=masks[worst],
        cross_check=cross,
    )


def biorthogonal_perturbation(
    w, q: BiorthogonalFamily, max_members=12, tol=DEFAULT_TOL, pairing="literal"
) -> PerturbationReport:
    """Certificate comparing the projections ``P_j`` with a biorthogonal family ``Q_j``.

    For each subset F, ``A_F = sum_F (P_j - Q_j)`` and ``B_F = sum_F P_j``.
    The ratio ``||A_F f|| / ||B_F f||`` is bounded only if
    ``null(B_F)`` lies inside ``null(A_F)``; any subset that breaks this makes
    the result inconclusive. Otherwise ``lambda_F = ||A_F B_F^+||``.

    ``pairing="components"`` applies ``Q_j`` to the component instead,
    ``A_F = sum_F (P_j - Q_j P_j)``. Then ``B_F f = 0`` forces every
    ``P_j f = 0`` and the containment holds automatically. Under the literal
    pairing, any ``Q_j`` that does not vanish on the other ``W_k`` breaks it
    for proper subsets, which is the generic case.

    Raises
    ------
    NotBiorthogonal
        If ``q`` fails the relations against its own ``q.subspaces``.
    TooManyMembers
    """
    if pairing not in ("literal", "components"):
        raise ValueError(f"unknown pairing {pairing!r}")
    w = as_fdual(w, tol)
    vs = tuple(q.subspaces)
    if len(q.operators) != w.m or len(vs) != w.m:
        raise ShapeMismatch(f"family has {len(q.operators)} operators for {w.m} members")
    if biorthogonality_residual(vs, q) > tol.eq_tol:
        raise NotBiorthogonal("family fails Q_i g_j = delta_ij g_j on its subspaces")
    if w.m > max_members:
        raise TooManyMembers(f"{w.m} members exceeds the exhaustive cap of {max_members}")

    if pairing == "literal":
        diffs = [p - qj for p, qj in zip(w.projectors, q.operators)]
    else:
        diffs = [p - qj @ p for p, qj in zip(w.projectors, q.operators)]
    lam, worst, violations = 0.0, (), []
    for members in subset_masks(w.m):
        a = sum(diffs[j] for j in members)
        b = sum(w.projectors[j] for j in members)
        u, s, vh = np.linalg.svd(b)
        r = int(np.count_nonzero(s > tol.rank_tol * s[0])) if s[0] > 0 else 0
        null = vh[r:].conj().T
        if null.size and operator_norm(a @ null) > tol.eq_tol * max(1.0, operator_norm(a)):
            violations.append(members)
            continue
        pinv = (vh[:r].conj().T / s[:r]) @ u[:, :r].conj().T
        lam_f = operator_norm(a @ pinv)
        if lam_f > lam or not worst:
            lam, worst = lam_f, members
    lam_global = operator_norm(sum(diffs))
    if violations:
        return PerturbationReport(
            lam_global, "subset_exhaustive", False, None,
            lambda_subsetwise=None, worst_subset=(), kernel_violations=tuple(violations),
        )
    conclusive, verdict, cross = _conclude(lam, vs, tol)
    return PerturbationReport(
        lam_global,
        "subset_exhaustive",
        conclusive,
        verdict,
        lambda_subsetwise=lam,
        worst_subset=worst,
        cross_check=cross,
    )

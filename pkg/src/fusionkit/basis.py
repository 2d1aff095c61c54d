"""Fusion bases: unique decompositions ``f = sum_j g_j`` with ``g_j`` in ``W_j``.

In finite dimension a family is a fusion basis exactly when the stacked
matrix ``E = [basis_0 | basis_1 | ...]`` is square and invertible. The
component maps ``f -> g_j`` are then the (generally oblique) projections

    P_j = basis_j @ (rows of E^-1 belonging to block j)

which satisfy ``P_i P_j = delta_ij P_j`` and ``sum_j P_j = I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend
from .core import DEFAULT_TOL, frozen, operator_norm, orthonormalize, projector
from .errors import NotFBasis, NotMinimal, ShapeMismatch, TooManyMembers
from .frame import FusionSystem, dimension_audit, is_complete, is_minimal

__all__ = [
    "FBasisVerdict",
    "FDualSystem",
    "BasisConstant",
    "BiorthogonalFamily",
    "is_f_basis",
    "f_dual",
    "as_fdual",
    "subset_masks",
    "partial_sum_norms",
    "basis_constant",
    "bessel_hilbert_constants",
    "dual_system",
    "biorthogonal_family",
    "biorthogonality_residual",
    "verify_biorthogonality",
]


@dataclass(frozen=True)
class FBasisVerdict:
    verdict: bool
    reason: str  # "ok", "dim_mismatch" or "singular_stack"

    def __bool__(self):
        return self.verdict


def is_f_basis(sys: FusionSystem, tol=DEFAULT_TOL) -> FBasisVerdict:
    if not dimension_audit(sys).f_basis_possible:
        return FBasisVerdict(False, "dim_mismatch")
    s = np.linalg.svd(sys.stacked, compute_uv=False)
    if s[-1] <= tol.rank_tol * s[0]:
        return FBasisVerdict(False, "singular_stack")
    return FBasisVerdict(True, "ok")


def _block_rows(sys, inv):
    return [inv[o:o + k, :] for o, k in zip(sys.offsets, sys.dims)]


@dataclass(frozen=True, eq=False)
class FDualSystem:
    """A fusion basis together with its family of component projections."""

    system: FusionSystem
    stacked: np.ndarray
    projectors: tuple

    def __post_init__(self):
        n = self.system.ambient_dim
        if self.stacked.shape != (n, n):
            raise ShapeMismatch(f"stacked matrix must be {n}x{n}, got {self.stacked.shape}")
        if len(self.projectors) != self.system.m:
            raise ShapeMismatch("one projector per member required")
        object.__setattr__(self, "stacked", frozen(self.stacked))
        object.__setattr__(self, "projectors", tuple(frozen(p) for p in self.projectors))

    @property
    def subspaces(self):
        return self.system.subspaces

    @property
    def m(self):
        return self.system.m

    @property
    def ambient_dim(self):
        return self.system.ambient_dim

    def decompose(self, f):
        """Components ``g_j = P_j f`` of the unique expansion of ``f``."""
        f = np.asarray(f, dtype=np.complex128)
        return [p @ f for p in self.projectors]

    def invariant_residuals(self):
        """Worst deviations from the three defining identities."""
        n = self.ambient_dim
        ps = self.projectors
        total = operator_norm(sum(ps) - np.eye(n))
        products = max(
            operator_norm(ps[i] @ ps[j] - (ps[j] if i == j else 0))
            for i in range(len(ps))
            for j in range(len(ps))
        )
        inv = np.linalg.inv(self.stacked)
        rng = max(
            operator_norm(p - s.basis @ rows)
            for p, s, rows in zip(ps, self.subspaces, _block_rows(self.system, inv))
        )
        return {"sum_identity": total, "products": products, "range": rng}

    def check_invariants(self, tol=DEFAULT_TOL):
        return all(v <= tol.eq_tol for v in self.invariant_residuals().values())


def f_dual(sys: FusionSystem, tol=DEFAULT_TOL) -> FDualSystem:
    """Component projections of a fusion basis.

    Raises
    ------
    NotFBasis
        With the failing reason from :func:`is_f_basis`.
    """
    verdict = is_f_basis(sys, tol)
    if not verdict:
        raise NotFBasis(f"not a fusion basis ({verdict.reason})")
    e = sys.stacked
    inv = np.linalg.inv(e)
    projectors = tuple(s.basis @ rows for s, rows in zip(sys.subspaces, _block_rows(sys, inv)))
    return FDualSystem(sys, e, projectors)


def as_fdual(obj, tol=DEFAULT_TOL) -> FDualSystem:
    if isinstance(obj, FDualSystem):
        return obj
    if isinstance(obj, FusionSystem):
        return f_dual(obj, tol)
    raise TypeError(f"expected FDualSystem or FusionSystem, got {type(obj).__name__}")


@dataclass(frozen=True)
class BasisConstant:
    value: Optional[float]
    method: str  # "exhaustive" or "not_computed"
    subset_count: int
    worst_subset: tuple = ()

    @classmethod
    def not_computed(cls):
        return cls(None, "not_computed", 0)


def subset_masks(m):
    """Member-index tuples in the order the subset sweep reports them (mask 1, 2, ...)."""
    return [tuple(j for j in range(m) if (mask >> j) & 1) for mask in range(1, 1 << m)]


def partial_sum_norms(fd: FDualSystem) -> np.ndarray:
    """``||S_F||`` for every nonempty subset F, indexed by ``mask - 1``.

    With ``X = E[:, F]`` and ``Y = E^-1[F, :]`` we have ``S_F = X Y``, and the
    nonzero eigenvalues of ``S_F^H S_F`` are those of ``(X^H X)(Y Y^H)``,
    i.e. of a product of principal submatrices of ``G = E^H E`` and
    ``H = E^-1 E^-H``. The sweep solves that small problem per subset.
    """
    e = np.asarray(fd.stacked)
    inv = np.linalg.inv(e)
    g = np.ascontiguousarray(e.conj().T @ e)
    h = np.ascontiguousarray(inv @ inv.conj().T)
    g = (g + g.conj().T) / 2
    h = (h + h.conj().T) / 2
    sys = fd.system
    offsets = np.asarray(sys.offsets, dtype=np.intp)
    sizes = np.asarray(sys.dims, dtype=np.intp)
    mu = _backend.subset_eigmax(g, h, offsets, sizes, 2)
    return np.sqrt(np.clip(mu, 0.0, None))


def basis_constant(fd, max_members=16, tol=DEFAULT_TOL) -> BasisConstant:
    """``M = max_F ||sum_{j in F} P_j||`` by exhaustive enumeration.

    Raises
    ------
    TooManyMembers
        If the member count exceeds ``max_members``; there is no
        approximate fallback.
    """
    fd = as_fdual(fd, tol)
    m = fd.m
    if m > max_members:
        raise TooManyMembers(f"{m} members exceeds the exhaustive cap of {max_members}")
    norms = partial_sum_norms(fd)
    worst = int(np.argmax(norms))
    # S_J is exactly the identity, so M >= 1 holds without rounding noise.
    value = max(float(norms[worst]), 1.0)
    return BasisConstant(value, "exhaustive", len(norms), subset_masks(m)[worst])


def bessel_hilbert_constants(fd, tol=DEFAULT_TOL):
    """Optimal ``(A, B)`` with ``A sum||g_j||^2 <= ||sum g_j||^2 <= B sum||g_j||^2``.

    Writing ``g_j = basis_j c_j`` gives ``sum ||g_j||^2 = ||c||^2`` and
    ``sum g_j = E c``, so ``A = sigma_min(E)^2`` and ``B = sigma_max(E)^2``.
    Any subset F uses a column subset of E, whose singular values interlace,
    so the same constants hold for every F.
    """
    fd = as_fdual(fd, tol)
    s = np.linalg.svd(fd.stacked, compute_uv=False)
    return float(s[-1] ** 2), float(s[0] ** 2)


def dual_system(fd, tol=DEFAULT_TOL) -> FDualSystem:
    """The system ``{(P_j^H W_j, P_j^H)}``, again a fusion basis system."""
    fd = as_fdual(fd, tol)
    subspaces = tuple(
        orthonormalize(p.conj().T @ s.basis, tol, label=s.label)
        for p, s in zip(fd.projectors, fd.subspaces)
    )
    sys = FusionSystem(subspaces, fd.system.weights)
    return FDualSystem(sys, sys.stacked, tuple(p.conj().T for p in fd.projectors))


@dataclass(frozen=True, eq=False)
class BiorthogonalFamily:
    """Operators ``Q_j`` with ``Q_i g = delta_ij g`` for ``g`` in ``V_j``.

    ``subspaces`` records the family ``V_j`` the relations refer to.
    """

    operators: tuple
    unique: bool
    subspaces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "operators", tuple(frozen(q) for q in self.operators))
        object.__setattr__(self, "subspaces", tuple(self.subspaces))


def biorthogonal_family(sys: FusionSystem, tol=DEFAULT_TOL) -> BiorthogonalFamily:
    """A biorthogonal family for a minimal system.

    For a complete system this is the unique f-dual. Otherwise the system is
    a fusion basis of its span ``H0``; the f-dual inside ``H0`` composed with
    the orthogonal projector onto ``H0`` is returned and flagged non-unique.

    Raises
    ------
    NotMinimal
        A biorthogonal family exists only for minimal systems.
    """
    minimal = is_minimal(sys, tol)
    if not minimal:
        raise NotMinimal(f"members {list(minimal.witness)} meet the span of the others")
    if is_complete(sys, tol):
        return BiorthogonalFamily(f_dual(sys, tol).projectors, True, sys.subspaces)
    h0 = orthonormalize(sys.stacked, tol).basis
    local = h0.conj().T @ sys.stacked  # coordinates of every member basis inside H0
    inv = np.linalg.inv(local)
    ops = tuple(
        s.basis @ rows @ h0.conj().T for s, rows in zip(sys.subspaces, _block_rows(sys, inv))
    )
    return BiorthogonalFamily(ops, False, sys.subspaces)


def _subspaces_of(obj):
    if isinstance(obj, (FusionSystem, FDualSystem)):
        return obj.subspaces
    return tuple(obj)


def biorthogonality_residual(sys, fam: BiorthogonalFamily) -> float:
    """``max_{i,j} ||Q_i basis_j - delta_ij basis_j||``."""
    subspaces = _subspaces_of(sys)
    if len(fam.operators) != len(subspaces):
        raise ShapeMismatch(f"{len(fam.operators)} operators for {len(subspaces)} members")
    n = subspaces[0].ambient_dim
    worst = 0.0
    for i, q in enumerate(fam.operators):
        if q.shape != (n, n):
            raise ShapeMismatch(f"operator {i} has shape {q.shape}, expected {(n, n)}")
        for j, s in enumerate(subspaces):
            target = s.basis if i == j else 0.0
            worst = max(worst, operator_norm(q @ s.basis - target))
    return worst


def verify_biorthogonality(sys, fam: BiorthogonalFamily, tol=DEFAULT_TOL) -> bool:
    return biorthogonality_residual(sys, fam) <= tol.eq_tol


def orthogonal_projectors(sys: FusionSystem):
    return [projector(s) for s in sys.subspaces]

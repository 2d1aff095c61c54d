"""Orthonormal fusion systems and Riesz fusion bases.

A Riesz fusion basis is the image ``{T V_j}`` of an orthonormal fusion basis
under an invertible ``T``. Here the reference orthonormal basis is always the
coordinate-block decomposition ``V_j = span{e_i : i in block j}``, which makes
``T = E`` (the stacked member bases) and every derived object deterministic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .basis import FDualSystem, as_fdual, f_dual, is_f_basis
from .core import (
    DEFAULT_TOL,
    CoefficientBundle,
    OperatorMatrix,
    Subspace,
    as_invertible_operator,
    bundle_norm,
    frozen,
    operator_norm,
    orthonormalize,
    projector,
    random_bundle,
)
from .errors import DimensionMismatch, InternalConsistencyError, NotOrthonormalSystem, NotRiesz
from .frame import FusionSystem, is_complete

__all__ = [
    "OrthonormalKind",
    "RieszCertificate",
    "ResolutionFamily",
    "orthonormal_classify",
    "cross_gram_residual",
    "pythagoras_check",
    "bessel_inequality_check",
    "riesz_analyze",
    "gram_orthonormality_check",
    "resolutions_of_identity",
    "transform_f_basis",
    "coordinate_blocks",
]


class OrthonormalKind(str, enum.Enum):
    NONE = "none"
    SYSTEM = "system"
    BASIS = "basis"


def cross_gram_residual(sys: FusionSystem) -> float:
    """``max_{i != j} ||basis_i^H basis_j||`` (0 for a single member)."""
    subs = sys.subspaces
    worst = 0.0
    for i in range(len(subs)):
        for j in range(i + 1, len(subs)):
            worst = max(worst, operator_norm(subs[i].basis.conj().T @ subs[j].basis))
    return worst


def orthonormal_classify(sys: FusionSystem, tol=DEFAULT_TOL) -> OrthonormalKind:
    """Mutually orthogonal members form an orthonormal system; complete ones a basis.

    Vanishing cross-Gram blocks are equivalent to the orthogonal projectors
    acting biorthogonally, ``P_i g_j = delta_ij g_j``.
    """
    if cross_gram_residual(sys) > tol.eq_tol:
        return OrthonormalKind.NONE
    if is_complete(sys, tol):
        return OrthonormalKind.BASIS
    return OrthonormalKind.SYSTEM


def _require_orthonormal(sys, tol):
    if orthonormal_classify(sys, tol) is OrthonormalKind.NONE:
        raise NotOrthonormalSystem("members are not mutually orthogonal")


def pythagoras_check(sys: FusionSystem, bundle: CoefficientBundle, tol=DEFAULT_TOL) -> float:
    """``| ||sum g_j||^2 - sum ||g_j||^2 |`` for an orthonormal system."""
    _require_orthonormal(sys, tol)
    total = bundle.total(sys.subspaces)
    return abs(float(np.vdot(total, total).real) - bundle_norm(bundle) ** 2)


def bessel_inequality_check(
    sys: FusionSystem, f, tol=DEFAULT_TOL, approximation_trials=20, seed=0
) -> float:
    """Margin ``||f||^2 - sum_j ||P_j f||^2`` for an orthonormal system.

    Also confirms that ``sum_j P_j f`` is the best approximation of ``f`` from
    the members' span, against ``approximation_trials`` random competitors.

    Raises
    ------
    NotOrthonormalSystem
    InternalConsistencyError
        If a random competitor approximates ``f`` better.
    """
    _require_orthonormal(sys, tol)
    f = np.asarray(f, dtype=np.complex128).ravel()
    if f.shape[0] != sys.ambient_dim:
        raise DimensionMismatch(f"vector has length {f.shape[0]}, expected {sys.ambient_dim}")
    comps = [s.basis.conj().T @ f for s in sys.subspaces]
    energy = sum(float(np.vdot(c, c).real) for c in comps)
    fnorm2 = float(np.vdot(f, f).real)
    margin = fnorm2 - energy

    if approximation_trials:
        best = np.linalg.norm(f - sum(s.basis @ c for s, c in zip(sys.subspaces, comps)))
        rng = np.random.default_rng(seed)
        scale = np.sqrt(fnorm2 / max(sys.ambient_dim, 1))
        for _ in range(approximation_trials):
            b = random_bundle(sys.subspaces, rng)
            other = np.linalg.norm(f - scale * b.total(sys.subspaces))
            if best > other + tol.eq_tol * max(1.0, np.sqrt(fnorm2)):
                raise InternalConsistencyError(
                    f"orthogonal components are not the best approximation ({best} > {other})"
                )
    return margin


def coordinate_blocks(dims, n):
    """Orthonormal basis ``V_j`` made of consecutive standard basis vectors."""
    eye = np.eye(n, dtype=np.complex128)
    out, start = [], 0
    for k in dims:
        out.append(Subspace(eye[:, start:start + k], label=f"V{len(out)}"))
        start += k
    return tuple(out)


@dataclass(frozen=True, eq=False)
class RieszCertificate:
    """Witness that ``W_j = T V_j`` for the coordinate-block orthonormal basis.

    ``gram`` is the Hermitian matrix ``G = (T T^H)^-1`` of the equivalent
    inner product ``<f, g>_G = g^H G f = <T^-1 f, T^-1 g>`` in which the
    members become mutually orthogonal. Norms in the two inner products are
    related by ``||f|| / ||T|| <= ||f||_G <= ||T^-1|| ||f||``.
    """

    is_riesz: bool
    dims: tuple
    A: Optional[float] = None
    B: Optional[float] = None
    T: Optional[OperatorMatrix] = None
    reference_basis: tuple = ()
    gram: Optional[np.ndarray] = None
    reason: str = "ok"

    def __post_init__(self):
        if self.gram is not None:
            object.__setattr__(self, "gram", frozen(self.gram))

    @property
    def T_norm(self):
        return None if self.T is None else self.T.norm

    @property
    def T_inverse_norm(self):
        return None if self.T is None else self.T.inverse_norm

    def require(self):
        if not self.is_riesz:
            raise NotRiesz(f"not a Riesz fusion basis ({self.reason})")
        return self


def riesz_analyze(sys: FusionSystem, tol=DEFAULT_TOL) -> RieszCertificate:
    """Decide the Riesz property and build the certificate.

    In finite dimension the members form a Riesz fusion basis exactly when
    their pooled orthonormal bases form a basis of the space, i.e. when
    ``E`` is square and invertible.
    """
    verdict = is_f_basis(sys, tol)
    if not verdict:
        return RieszCertificate(False, sys.dims, reason=verdict.reason)
    e = sys.stacked
    s = np.linalg.svd(e, compute_uv=False)
    einv = np.linalg.inv(e)
    gram = einv.conj().T @ einv
    gram = (gram + gram.conj().T) / 2
    return RieszCertificate(
        True,
        sys.dims,
        A=float(s[-1] ** 2),
        B=float(s[0] ** 2),
        T=OperatorMatrix.verify(e, tol),
        reference_basis=coordinate_blocks(sys.dims, sys.ambient_dim),
        gram=gram,
    )


def gram_orthonormality_check(cert: RieszCertificate, sys: FusionSystem, tol=DEFAULT_TOL):
    """Residual of orthogonality of the members and self-adjointness of ``P_j`` under G."""
    cert.require()
    g = cert.gram
    subs = sys.subspaces
    worst = 0.0
    for i in range(len(subs)):
        for j in range(len(subs)):
            if i != j:
                worst = max(worst, operator_norm(subs[i].basis.conj().T @ g @ subs[j].basis))
    for p in f_dual(sys, tol).projectors:
        worst = max(worst, operator_norm(p.conj().T @ g - g @ p))
    return worst


@dataclass(frozen=True, eq=False)
class ResolutionFamily:
    kind: str  # "P", "S", "U" or "R"
    operators: tuple

    def __post_init__(self):
        object.__setattr__(self, "operators", tuple(frozen(o) for o in self.operators))

    def sum_residual(self):
        n = self.operators[0].shape[0]
        return operator_norm(sum(self.operators) - np.eye(n))

    def idempotency_residual(self):
        return max(operator_norm(o @ o - o) for o in self.operators)


def resolutions_of_identity(cert: RieszCertificate):
    """The four idempotent resolutions of the identity built from ``T``.

    ``P_j = T pi_j T^-1``, ``S_j = T^-1 pi_j T``, ``U_j = T^H pi_j T^-H`` and
    ``R_j = T^-H pi_j T^H``, with ``pi_j`` the projector onto ``V_j``.
    """
    cert.require()
    t = np.asarray(cert.T.matrix)
    tinv = cert.T.inverse
    th, thinv = t.conj().T, tinv.conj().T
    pis = [projector(v) for v in cert.reference_basis]
    return {
        "P": ResolutionFamily("P", tuple(t @ p @ tinv for p in pis)),
        "S": ResolutionFamily("S", tuple(tinv @ p @ t for p in pis)),
        "U": ResolutionFamily("U", tuple(th @ p @ thinv for p in pis)),
        "R": ResolutionFamily("R", tuple(thinv @ p @ th for p in pis)),
    }


def transform_f_basis(fd, t, tol=DEFAULT_TOL) -> FDualSystem:
    """Image system ``{(T W_j, T P_j T^-1)}`` under an invertible ``T``.

    Raises
    ------
    SingularOperator
    """
    fd = as_fdual(fd, tol)
    op = as_invertible_operator(t, tol)
    if op.n != fd.ambient_dim:
        raise DimensionMismatch(f"operator is {op.n}x{op.n}, system lives in C^{fd.ambient_dim}")
    tm = np.asarray(op.matrix)
    tinv = op.inverse
    subs = tuple(orthonormalize(tm @ s.basis, tol, label=s.label) for s in fd.subspaces)
    sys = FusionSystem(subs, fd.system.weights)
    return FDualSystem(sys, sys.stacked, tuple(tm @ p @ tinv for p in fd.projectors))

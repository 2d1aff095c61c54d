"""Weighted subspace families: optimal fusion frame bounds and structural predicates.

The optimal bounds come from the positive semidefinite operator
``S = sum_j w_j^2 P_j`` (``P_j`` the orthogonal projector onto member j):
for every f, ``sum_j w_j^2 ||P_j f||^2 = <S f, f>``, so the best lower and
upper constants are the extreme eigenvalues of ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import (
    DEFAULT_TOL,
    Subspace,
    as_invertible_operator,
    check_same_ambient,
    intersection_dim,
    numerical_rank,
    orthonormalize,
    projector,
)
from .errors import DimensionMismatch, NonpositiveWeight, NotAFrame, ShapeMismatch

__all__ = [
    "FusionSystem",
    "FrameBounds",
    "FrameFlags",
    "MinimalityResult",
    "DimensionAudit",
    "TransformCheck",
    "frame_operator",
    "frame_bounds",
    "classify",
    "is_complete",
    "is_minimal",
    "is_exact",
    "dimension_audit",
    "predict_transformed_bounds",
    "transform_system",
    "check_transformed_bounds",
]


@dataclass(frozen=True, eq=False)
class FusionSystem:
    """An ordered, finite family of weighted subspaces of one ambient space.

    Member order is the index set: everything that depends on an ordering
    (the stacked matrix, witnesses, subset masks) follows list position,
    starting at 0.
    """

    subspaces: tuple
    weights: tuple

    def __post_init__(self):
        subspaces = tuple(self.subspaces)
        if not subspaces:
            raise ShapeMismatch("a fusion system needs at least one member")
        if not all(isinstance(s, Subspace) for s in subspaces):
            raise TypeError("members must be Subspace instances (see orthonormalize)")
        check_same_ambient(subspaces)
        weights = tuple(float(w) for w in self.weights)
        if len(weights) != len(subspaces):
            raise ShapeMismatch(f"{len(subspaces)} subspaces but {len(weights)} weights")
        for j, w in enumerate(weights):
            if not (np.isfinite(w) and w > 0):
                raise NonpositiveWeight(f"weight of member {j} must be > 0, got {w!r}")
        object.__setattr__(self, "subspaces", subspaces)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_subspaces(cls, subspaces: Sequence[Subspace], weights=None):
        subspaces = tuple(subspaces)
        if weights is None:
            weights = (1.0,) * len(subspaces)
        return cls(subspaces, tuple(weights))

    @classmethod
    def from_spanning_sets(cls, raws, weights=None, tol=DEFAULT_TOL):
        return cls.from_subspaces([orthonormalize(r, tol) for r in raws], weights)

    @property
    def ambient_dim(self) -> int:
        return self.subspaces[0].ambient_dim

    @property
    def m(self) -> int:
        return len(self.subspaces)

    def __len__(self):
        return len(self.subspaces)

    @property
    def dims(self):
        return tuple(s.dim for s in self.subspaces)

    @property
    def offsets(self):
        return tuple(int(o) for o in np.concatenate([[0], np.cumsum(self.dims)[:-1]]))

    @property
    def stacked(self) -> np.ndarray:
        """Horizontal concatenation of the member bases, in member order."""
        return np.hstack([s.basis for s in self.subspaces])

    def without(self, i: int) -> Optional["FusionSystem"]:
        """The system with member ``i`` removed (``None`` if nothing is left)."""
        keep = [j for j in range(self.m) if j != i]
        if not keep:
            return None
        return FusionSystem(
            tuple(self.subspaces[j] for j in keep), tuple(self.weights[j] for j in keep)
        )

    def with_weights(self, weights):
        return FusionSystem(self.subspaces, tuple(weights))


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float
    is_frame: bool


@dataclass(frozen=True)
class FrameFlags:
    bessel: bool
    bessel_bound: float
    frame: bool
    tight: bool
    parseval: bool
    uniform_weight: bool


@dataclass(frozen=True)
class MinimalityResult:
    minimal: bool
    witness: tuple  # violating member indices

    def __bool__(self):
        return self.minimal


@dataclass(frozen=True)
class DimensionAudit:
    sum_dims: int
    ambient_dim: int
    f_basis_possible: bool


@dataclass(frozen=True)
class TransformCheck:
    predicted: tuple
    actual: FrameBounds
    contained: bool


def frame_operator(sys: FusionSystem) -> np.ndarray:
    """``S = sum_j w_j^2 P_j``."""
    n = sys.ambient_dim
    s = np.zeros((n, n), dtype=np.complex128)
    for w, sub in zip(sys.weights, sys.subspaces):
        s += w * w * projector(sub)
    return s


def frame_bounds(sys: FusionSystem, tol=DEFAULT_TOL) -> FrameBounds:
    """Optimal fusion frame bounds ``(C, D)``.

    Non-spanning systems are not an error: they report ``C = 0`` and
    ``is_frame = False``.
    """
    ev = np.linalg.eigvalsh(frame_operator(sys))
    upper = float(max(ev[-1], 0.0))
    lower = float(max(ev[0], 0.0))
    is_frame = lower > tol.rank_tol * upper
    if not is_frame:
        lower = 0.0
    return FrameBounds(lower, upper, is_frame)


def classify(sys: FusionSystem, tol=DEFAULT_TOL) -> FrameFlags:
    b = frame_bounds(sys, tol)
    tight = b.is_frame and abs(b.lower - b.upper) <= tol.eq_tol * b.upper
    w = np.asarray(sys.weights)
    return FrameFlags(
        # finite dimension: the upper bound always exists
        bessel=True,
        bessel_bound=b.upper,
        frame=b.is_frame,
        tight=tight,
        parseval=tight and abs(b.lower - 1.0) <= tol.eq_tol,
        uniform_weight=bool(np.all(np.abs(w - w[0]) <= tol.eq_tol)),
    )


def is_complete(sys: FusionSystem, tol=DEFAULT_TOL) -> bool:
    """Whether the members span the ambient space.

    Equivalent to the joint kernel ``{f : P_j f = 0 for all j}`` being trivial.
    """
    return numerical_rank(sys.stacked, tol) == sys.ambient_dim


def _span_of(subspaces, tol):
    return orthonormalize(np.hstack([s.basis for s in subspaces]), tol)


def is_minimal(sys: FusionSystem, tol=DEFAULT_TOL) -> MinimalityResult:
    """Each member must meet the span of the others only at zero."""
    if sys.m == 1:
        return MinimalityResult(True, ())
    witness = []
    for i in range(sys.m):
        others = _span_of([s for j, s in enumerate(sys.subspaces) if j != i], tol)
        if intersection_dim(sys.subspaces[i], others, tol) > 0:
            witness.append(i)
    return MinimalityResult(not witness, tuple(witness))


def is_exact(sys: FusionSystem, tol=DEFAULT_TOL) -> bool:
    """A frame that stops being one when any single member is removed.

    Raises
    ------
    NotAFrame
        If ``sys`` is not a fusion frame to begin with.
    """
    if not frame_bounds(sys, tol).is_frame:
        raise NotAFrame("exactness is only defined for fusion frames")
    for i in range(sys.m):
        rest = sys.without(i)
        if rest is not None and is_complete(rest, tol):
            return False
    return True


def dimension_audit(sys: FusionSystem) -> DimensionAudit:
    total = int(sum(sys.dims))
    return DimensionAudit(total, sys.ambient_dim, total == sys.ambient_dim)


def predict_transformed_bounds(bounds: FrameBounds, t, tol=DEFAULT_TOL):
    """Bounds guaranteed for the image system ``{(T W_j, w_j)}``.

    ``C' = C / (||T||^2 ||T^-1||^2)`` and ``D' = D ||T||^2 ||T^-1||^2``.
    """
    op = as_invertible_operator(t, tol)
    kappa2 = (op.norm * op.inverse_norm) ** 2
    return (bounds.lower / kappa2, bounds.upper * kappa2)


def transform_system(sys: FusionSystem, t, tol=DEFAULT_TOL) -> FusionSystem:
    """Push every member through ``T`` (weights unchanged)."""
    op = as_invertible_operator(t, tol)
    if op.n != sys.ambient_dim:
        raise DimensionMismatch(f"operator is {op.n}x{op.n}, system lives in C^{sys.ambient_dim}")
    return FusionSystem(
        tuple(orthonormalize(op.matrix @ s.basis, tol, label=s.label) for s in sys.subspaces),
        sys.weights,
    )


def check_transformed_bounds(sys: FusionSystem, t, tol=DEFAULT_TOL) -> TransformCheck:
    """Compare the actual bounds of ``T``'s image system with the prediction."""
    before = frame_bounds(sys, tol)
    lo, hi = predict_transformed_bounds(before, t, tol)
    after = frame_bounds(transform_system(sys, t, tol), tol)
    slack = tol.eq_tol * max(hi, 1.0)
    ok = after.lower >= lo - slack and after.upper <= hi + slack
    return TransformCheck((lo, hi), after, ok)

"""Linear-algebra layer: subspaces, projectors, ranks, norms, coefficient bundles.

All values are immutable once built (arrays are flagged read-only), and all
functions are pure, so everything here is safe to share between threads.

Scalars are complex double precision throughout. Real input is embedded
with zero imaginary part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, ShapeMismatch, SingularOperator, ZeroSubspace

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "Subspace",
    "OperatorMatrix",
    "CoefficientBundle",
    "as_complex_matrix",
    "frozen",
    "orthonormalize",
    "projector",
    "numerical_rank",
    "intersection_dim",
    "operator_norm",
    "bundle_norm",
    "bundle_inner",
    "random_bundle",
    "span_distance",
    "as_invertible_operator",
    "check_same_ambient",
]


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances used by every numerical decision.

    Attributes
    ----------
    ortho_tol : float
        Allowed deviation of ``basis^H basis`` from the identity.
    rank_tol : float
        Singular values at or below ``rank_tol * sigma_max`` count as zero.
    eq_tol : float
        Slack for matrix identities (idempotency, sums to identity, ...).
    """

    ortho_tol: float = 1e-10
    rank_tol: float = 1e-10
    eq_tol: float = 1e-8

    def __post_init__(self):
        for name in ("ortho_tol", "rank_tol", "eq_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    def as_dict(self):
        return {"ortho_tol": self.ortho_tol, "rank_tol": self.rank_tol, "eq_tol": self.eq_tol}


DEFAULT_TOL = Tolerances()


def frozen(a):
    """Return a read-only complex copy of ``a``."""
    out = np.array(a, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def as_complex_matrix(a, name="matrix"):
    """Coerce ``a`` to a 2-D complex array (vectors become one column)."""
    out = np.asarray(a, dtype=np.complex128)
    if out.ndim == 1:
        out = out[:, None]
    if out.ndim != 2:
        raise ShapeMismatch(f"{name} must be 1-D or 2-D, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{name} contains non-finite entries")
    return out


def operator_norm(a):
    """Spectral norm (largest singular value) of a matrix."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if a.ndim == 1:
        return float(np.linalg.norm(a))
    return float(np.linalg.norm(a, 2))


def numerical_rank(a, tol=DEFAULT_TOL):
    """Rank by singular-value thresholding relative to the largest one."""
    a = np.asarray(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_tol * s[0]))


def _fix_phases(u):
    # Make the largest-modulus entry of each column real and positive, so
    # orthonormal bases from the SVD do not depend on LAPACK sign choices.
    idx = np.argmax(np.abs(u) > np.abs(u).max(axis=0) * (1 - 1e-12), axis=0)
    pivots = u[idx, np.arange(u.shape[1])]
    return u * (np.abs(pivots) / pivots)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^n held as an n x k matrix with orthonormal columns.

    Use :func:`orthonormalize` to build one from an arbitrary spanning set;
    the constructor only accepts bases that are already orthonormal.
    """

    basis: np.ndarray
    label: Optional[str] = None
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        b = as_complex_matrix(self.basis, "basis")
        n, k = b.shape
        if k < 1:
            raise ZeroSubspace("a subspace needs at least one basis column")
        if k > n:
            raise ShapeMismatch(f"{k} orthonormal columns cannot fit in C^{n}")
        err = operator_norm(b.conj().T @ b - np.eye(k))
        if err > self.tol.ortho_tol:
            raise ValueError(
                f"basis columns are not orthonormal (deviation {err:.3e}); use orthonormalize()"
            )
        object.__setattr__(self, "basis", frozen(b))

    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def projector(self):
        return projector(self)

    def __repr__(self):
        tag = f", label={self.label!r}" if self.label else ""
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim}{tag})"


def orthonormalize(raw, tol=DEFAULT_TOL, label=None):
    """Orthonormal basis for the column space of ``raw``.

    Columns that are already orthonormal are kept verbatim. Otherwise the
    left singular vectors above the rank threshold are used, with a
    deterministic phase convention.

    Raises
    ------
    ZeroSubspace
        If every column is numerically zero.
    """
    a = as_complex_matrix(raw, "raw")
    n, m = a.shape
    if m == 0 or n == 0:
        raise ZeroSubspace("empty spanning set")
    if np.max(np.linalg.norm(a, axis=0)) <= tol.rank_tol:
        raise ZeroSubspace("all columns are numerically zero")
    if m <= n and operator_norm(a.conj().T @ a - np.eye(m)) <= tol.ortho_tol:
        return Subspace(a, label=label, tol=tol)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = int(np.count_nonzero(s > tol.rank_tol * s[0]))
    return Subspace(_fix_phases(u[:, :r]), label=label, tol=tol)


def projector(w):
    """Orthogonal projector ``basis @ basis^H`` onto ``w``."""
    b = w.basis
    return b @ b.conj().T


def _check_same_ambient(*spaces):
    dims = {s.ambient_dim for s in spaces}
    if len(dims) > 1:
        raise DimensionMismatch(f"subspaces live in different ambient dimensions {sorted(dims)}")


def intersection_dim(w, v, tol=DEFAULT_TOL):
    """``dim(W ∩ V) = k_W + k_V - rank([basis_W | basis_V])``."""
    _check_same_ambient(w, v)
    stacked = np.hstack([w.basis, v.basis])
    return w.dim + v.dim - numerical_rank(stacked, tol)


def span_distance(w, v):
    """Operator-norm distance between the orthogonal projectors of two subspaces."""
    _check_same_ambient(w, v)
    return operator_norm(projector(w) - projector(v))


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A square operator with a verification tag.

    ``tag`` is one of ``"general"``, ``"invertible-verified"`` and
    ``"unitary-verified"``. Build through :meth:`verify` to get the
    strongest tag the matrix earns.
    """

    matrix: np.ndarray
    tag: str = "general"

    TAGS = ("general", "invertible-verified", "unitary-verified")

    def __post_init__(self):
        a = as_complex_matrix(self.matrix, "operator")
        if a.shape[0] != a.shape[1]:
            raise ShapeMismatch(f"operator must be square, got {a.shape}")
        if self.tag not in self.TAGS:
            raise ValueError(f"unknown tag {self.tag!r}")
        if self.tag != "general":
            s = np.linalg.svd(a, compute_uv=False)
            if s[0] == 0.0 or s[-1] <= DEFAULT_TOL.rank_tol * s[0]:
                raise SingularOperator(f"matrix tagged {self.tag!r} is numerically singular")
        object.__setattr__(self, "matrix", frozen(a))

    @classmethod
    def verify(cls, matrix, tol=DEFAULT_TOL):
        a = as_complex_matrix(matrix, "operator")
        if a.shape[0] != a.shape[1]:
            raise ShapeMismatch(f"operator must be square, got {a.shape}")
        s = np.linalg.svd(a, compute_uv=False)
        if s[0] == 0.0 or s[-1] <= tol.rank_tol * s[0]:
            return cls(a, "general")
        if operator_norm(a.conj().T @ a - np.eye(a.shape[0])) <= tol.eq_tol:
            return cls(a, "unitary-verified")
        return cls(a, "invertible-verified")

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def is_invertible(self):
        return self.tag != "general"

    def require_invertible(self):
        if not self.is_invertible:
            raise SingularOperator("operator is not verified invertible")
        return self

    @property
    def norm(self):
        return operator_norm(self.matrix)

    @property
    def inverse(self):
        self.require_invertible()
        return np.linalg.inv(self.matrix)

    @property
    def inverse_norm(self):
        # ||T^{-1}|| = 1 / sigma_min(T)
        self.require_invertible()
        return 1.0 / float(np.linalg.svd(self.matrix, compute_uv=False)[-1])

    @property
    def condition(self):
        return self.norm * self.inverse_norm


def as_invertible_operator(t, tol=DEFAULT_TOL):
    """Wrap ``t`` as a verified invertible :class:`OperatorMatrix` or raise SingularOperator."""
    if isinstance(t, OperatorMatrix):
        if t.tag == "general":
            # re-check: a matrix wrapped without verification may still be invertible
            t = OperatorMatrix.verify(t.matrix, tol)
        return t.require_invertible()
    return OperatorMatrix.verify(t, tol).require_invertible()


@dataclass(frozen=True, eq=False)
class CoefficientBundle:
    """An element ``{g_j}`` of the direct sum of the members' spaces.

    ``parts[j]`` holds the coordinates of ``g_j`` in the orthonormal basis
    of the j-th subspace, i.e. ``g_j = basis_j @ parts[j]``. Since the bases
    are orthonormal, ``||g_j|| = ||parts[j]||``.
    """

    parts: tuple

    def __post_init__(self):
        parts = tuple(frozen(np.atleast_1d(np.asarray(p)).ravel()) for p in self.parts)
        object.__setattr__(self, "parts", parts)

    def __len__(self):
        return len(self.parts)

    @property
    def shape(self):
        return tuple(p.shape[0] for p in self.parts)

    def conforms_to(self, subspaces):
        return len(subspaces) == len(self.parts) and all(
            s.dim == p.shape[0] for s, p in zip(subspaces, self.parts)
        )

    def check(self, subspaces):
        if not self.conforms_to(subspaces):
            raise ShapeMismatch(
                f"bundle shape {self.shape} does not match member dims "
                f"{tuple(s.dim for s in subspaces)}"
            )

    def vectors(self, subspaces):
        """The vectors ``g_j`` in the ambient space."""
        self.check(subspaces)
        return [s.basis @ p for s, p in zip(subspaces, self.parts)]

    def total(self, subspaces, members=None):
        """``sum_j g_j``, optionally restricted to the indices in ``members``."""
        self.check(subspaces)
        n = subspaces[0].ambient_dim
        out = np.zeros(n, dtype=np.complex128)
        for j in range(len(self.parts)) if members is None else members:
            out += subspaces[j].basis @ self.parts[j]
        return out

    @classmethod
    def from_vectors(cls, subspaces, vectors):
        """Coordinates of vectors assumed to lie in the respective subspaces."""
        if len(vectors) != len(subspaces):
            raise ShapeMismatch("one vector per subspace required")
        return cls(tuple(s.basis.conj().T @ np.asarray(g) for s, g in zip(subspaces, vectors)))

    @classmethod
    def zeros(cls, subspaces):
        return cls(tuple(np.zeros(s.dim, dtype=np.complex128) for s in subspaces))


def _check_pair(a, b):
    if a.shape != b.shape:
        raise ShapeMismatch(f"bundle shapes differ: {a.shape} vs {b.shape}")


def bundle_norm(b):
    """``sqrt(sum_j ||g_j||^2)``."""
    return float(np.sqrt(sum(np.vdot(p, p).real for p in b.parts)))


def bundle_inner(a, b):
    """``sum_j <f_j, g_j>``, linear in the first argument."""
    _check_pair(a, b)
    return complex(sum(np.vdot(q, p) for p, q in zip(a.parts, b.parts)))


def random_bundle(subspaces, rng):
    """Bundle with independent complex Gaussian coordinates."""
    return CoefficientBundle(
        tuple(rng.standard_normal(s.dim) + 1j * rng.standard_normal(s.dim) for s in subspaces)
    )


def check_same_ambient(spaces: Sequence[Subspace]):
    _check_same_ambient(*spaces)

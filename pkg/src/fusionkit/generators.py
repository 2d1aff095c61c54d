"""Fixture and random-instance generators.

Random instances use numpy's ``PCG64`` bit generator through
``numpy.random.default_rng(seed)``; the draw order inside each generator is
part of the fixture format (``GENERATOR_VERSION``), so a given
``(kind, params, seed)`` always yields the same system.
"""

from __future__ import annotations

import numpy as np

from .core import DEFAULT_TOL, orthonormalize
from .errors import BadParams
from .frame import FusionSystem

__all__ = [
    "GENERATOR_VERSION",
    "RNG_NAME",
    "KINDS",
    "generate",
    "example_2_2",
    "example_2_3",
    "example_3_2i",
    "exact_not_riesz",
    "haar_unitary",
    "random_invertible",
    "random_orthonormal",
    "random_riesz",
    "random_system",
    "rotate",
    "plane_rotation",
]

GENERATOR_VERSION = 1
RNG_NAME = "numpy.random.PCG64"


def _rng(seed):
    return np.random.default_rng(seed)


def _eye(n):
    return np.eye(n, dtype=np.complex128)


def example_2_2(N=3):
    """N lines ``span{sum_{i != j} e_i}`` in C^N, a fusion basis."""
    N = int(N)
    if N < 2:
        raise BadParams("example_2_2 needs N >= 2")
    ones = np.ones((N, N)) - np.eye(N)
    return FusionSystem.from_spanning_sets([ones[:, j] for j in range(N)])


def example_2_3(m=2):
    """m coordinate planes ``span{e_{2j-1}, e_{2j}}`` in C^{2m}."""
    m = int(m)
    if m < 1:
        raise BadParams("example_2_3 needs m >= 1")
    eye = _eye(2 * m)
    return FusionSystem.from_spanning_sets([eye[:, 2 * j:2 * j + 2] for j in range(m)])


def example_3_2i(m=2):
    """m lines ``span{(e_{2j-1} + e_{2j}) / sqrt 2}`` in C^{2m}: orthonormal, incomplete."""
    m = int(m)
    if m < 1:
        raise BadParams("example_3_2i needs m >= 1")
    eye = _eye(2 * m)
    return FusionSystem.from_spanning_sets(
        [(eye[:, 2 * j] + eye[:, 2 * j + 1]) / np.sqrt(2) for j in range(m)]
    )


def exact_not_riesz():
    """``{span{e1, e2}, span{e2, e3}}`` in C^3: exact frame, not a fusion basis."""
    eye = _eye(3)
    return FusionSystem.from_spanning_sets([eye[:, 0:2], eye[:, 1:3]])


def haar_unitary(n, rng):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_invertible(n, cond, rng):
    """``U diag(s) V^H`` with Haar ``U, V`` and singular values from 1 down to 1/cond."""
    if not cond >= 1:
        raise BadParams("condition number must be >= 1")
    u = haar_unitary(n, rng)
    v = haar_unitary(n, rng)
    s = np.geomspace(1.0, 1.0 / cond, n) if n > 1 else np.ones(1)
    return (u * s) @ v.conj().T


def _check_dims(n, dims):
    dims = [int(k) for k in dims]
    if not dims or any(k < 1 for k in dims):
        raise BadParams("dims must be a nonempty list of positive integers")
    if sum(dims) != n:
        raise BadParams(f"sum of dims {sum(dims)} != ambient dimension {n}")
    return dims


def _split(mat, dims):
    out, start = [], 0
    for k in dims:
        out.append(mat[:, start:start + k])
        start += k
    return out


def random_orthonormal(n, dims, seed=0):
    """Orthonormal fusion basis from a Haar unitary split into column blocks."""
    dims = _check_dims(int(n), dims)
    u = haar_unitary(int(n), _rng(seed))
    return FusionSystem.from_spanning_sets(_split(u, dims))


def random_riesz(n, dims, cond=4.0, seed=0):
    """Random orthonormal decomposition pushed through an invertible map of condition ``cond``."""
    n = int(n)
    dims = _check_dims(n, dims)
    rng = _rng(seed)
    u = haar_unitary(n, rng)
    t = random_invertible(n, float(cond), rng)
    return FusionSystem.from_spanning_sets(_split(t @ u, dims))


def random_system(n, dims, seed=0, weights=None):
    """Independent random subspaces of the given dimensions (no sum constraint).

    ``weights`` may be ``"random"`` for weights drawn from [0.5, 2].
    """
    n = int(n)
    dims = [int(k) for k in dims]
    if not dims or any(k < 1 or k > n for k in dims):
        raise BadParams("each dimension must lie in [1, n]")
    rng = _rng(seed)
    raws = [rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k)) for k in dims]
    if weights == "random":
        weights = rng.uniform(0.5, 2.0, len(dims))
    return FusionSystem.from_spanning_sets(raws, weights)


def plane_rotation(n, theta, rng):
    """Rotation by ``theta`` in a random real 2-plane of C^n (identity elsewhere)."""
    if n < 2:
        raise BadParams("rotation needs ambient dimension >= 2")
    x = rng.standard_normal((n, 2))
    q, _ = np.linalg.qr(x)
    u, v = q[:, 0], q[:, 1]
    c, s = np.cos(theta), np.sin(theta)
    return (
        _eye(n)
        + (c - 1.0) * (np.outer(u, u) + np.outer(v, v))
        + s * (np.outer(v, u) - np.outer(u, v))
    )


def rotate(sys, theta, seed=0, mode="common", tol=DEFAULT_TOL):
    """Rotate the members of ``sys`` by angle ``theta``.

    ``mode="common"`` applies one seeded plane rotation to every member.
    ``mode="independent"`` draws a separate seeded plane for each member,
    which generally destroys the decomposition structure and is the harder
    test for perturbation certificates.
    """
    rng = _rng(seed)
    n = sys.ambient_dim
    if mode == "common":
        r = plane_rotation(n, theta, rng)
        rots = [r] * sys.m
    elif mode == "independent":
        rots = [plane_rotation(n, theta, rng) for _ in range(sys.m)]
    else:
        raise BadParams(f"unknown rotation mode {mode!r}")
    return FusionSystem(
        tuple(orthonormalize(r @ s.basis, tol, label=s.label) for r, s in zip(rots, sys.subspaces)),
        sys.weights,
    )


KINDS = {
    "example_2_2": (example_2_2, ("N",)),
    "example_2_3": (example_2_3, ("m",)),
    "example_3_2i": (example_3_2i, ("m",)),
    "exact_not_riesz": (exact_not_riesz, ()),
    "random_orthonormal": (random_orthonormal, ("n", "dims")),
    "random_riesz": (random_riesz, ("n", "dims", "cond")),
    "random_system": (random_system, ("n", "dims")),
    "rotate": (rotate, ("sys", "theta")),
}

_SEEDED = {"random_orthonormal", "random_riesz", "random_system", "rotate"}


def generate(kind, params=None, seed=0):
    """Dispatch by name. ``params`` is a mapping of the kind's parameters."""
    if kind not in KINDS:
        raise BadParams(f"unknown generator {kind!r}; choose from {sorted(KINDS)}")
    func, _ = KINDS[kind]
    params = dict(params or {})
    if kind in _SEEDED:
        params["seed"] = seed
    try:
        return func(**params)
    except TypeError as exc:
        raise BadParams(f"bad parameters for {kind}: {exc}") from None

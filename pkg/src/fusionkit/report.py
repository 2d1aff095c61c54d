"""Assemble the full analysis of one system into a JSON-ready report."""

from __future__ import annotations

from .basis import (
    basis_constant,
    bessel_hilbert_constants,
    biorthogonal_family,
    biorthogonality_residual,
    f_dual,
    is_f_basis,
)
from .core import DEFAULT_TOL
from .errors import InternalConsistencyError, TooManyMembers
from .frame import FusionSystem, classify, dimension_audit, frame_bounds, is_complete, is_exact, is_minimal
from .riesz import (
    OrthonormalKind,
    cross_gram_residual,
    gram_orthonormality_check,
    orthonormal_classify,
    resolutions_of_identity,
    riesz_analyze,
)

__all__ = ["REPORT_SCHEMA", "analyze", "render_text"]

REPORT_SCHEMA = "fusionkit.analysis/1"

# bessel_hilbert_constants and riesz_analyze compute (A, B) by separate routes
_AB_AGREEMENT = 1e-10


def _const(value, source, note=None):
    entry = {"value": value, "source": source}
    if note:
        entry["note"] = note
    return entry


def analyze(sys: FusionSystem, tol=DEFAULT_TOL, seed=None, max_members=16, metadata=None):
    """Run every applicable check on ``sys``.

    Constants that do not apply are present with ``value: null`` and a note;
    they are never reported as zero.

    Raises
    ------
    InternalConsistencyError
        If two independent computations of the same quantity disagree.
    """
    bounds = frame_bounds(sys, tol)
    flags_frame = classify(sys, tol)
    complete = is_complete(sys, tol)
    minimal = is_minimal(sys, tol)
    exact = is_exact(sys, tol) if bounds.is_frame else None
    fb = is_f_basis(sys, tol)
    ortho = orthonormal_classify(sys, tol)
    cert = riesz_analyze(sys, tol)
    audit = dimension_audit(sys)

    if bounds.is_frame != complete:
        raise InternalConsistencyError("frame property and completeness disagree")
    if cert.is_riesz != fb.verdict:
        raise InternalConsistencyError("Riesz test and fusion-basis test disagree")

    residuals = {"cross_gram": cross_gram_residual(sys)}
    constants = {
        "C": _const(bounds.lower, "frame_bounds"),
        "D": _const(bounds.upper, "frame_bounds"),
        "lambda": _const(None, "paley_wiener_global", "no candidate family supplied"),
    }
    if fb:
        fd = f_dual(sys, tol)
        a, b = bessel_hilbert_constants(fd, tol)
        if abs(a - cert.A) > _AB_AGREEMENT or abs(b - cert.B) > _AB_AGREEMENT:
            raise InternalConsistencyError("Bessel/Hilbert constants disagree with Riesz certificate")
        constants["A"] = _const(a, "bessel_hilbert_constants")
        constants["B"] = _const(b, "bessel_hilbert_constants")
        try:
            bc = basis_constant(fd, max_members, tol)
            constants["M"] = _const(bc.value, "basis_constant")
            constants["M"]["worst_subset"] = list(bc.worst_subset)
        except TooManyMembers as exc:
            constants["M"] = _const(None, "basis_constant", str(exc))
        residuals["f_dual"] = fd.invariant_residuals()
        residuals["gram_orthonormality"] = gram_orthonormality_check(cert, sys, tol)
        fams = resolutions_of_identity(cert)
        residuals["resolutions"] = {
            k: {"sum": f.sum_residual(), "idempotency": f.idempotency_residual()}
            for k, f in fams.items()
        }
    else:
        note = f"not a fusion basis ({fb.reason})"
        for key, source in (("A", "bessel_hilbert_constants"), ("B", "bessel_hilbert_constants"),
                            ("M", "basis_constant")):
            constants[key] = _const(None, source, note)
    if minimal:
        residuals["biorthogonality"] = biorthogonality_residual(sys, biorthogonal_family(sys, tol))

    report = {
        "schema": REPORT_SCHEMA,
        "ambient_dim": sys.ambient_dim,
        "member_dims": list(sys.dims),
        "weights": list(sys.weights),
        "flags": {
            "complete": complete,
            "minimal": minimal.minimal,
            "exact": exact,
            "f_basis": fb.verdict,
            "orthonormal_system": ortho is not OrthonormalKind.NONE,
            "orthonormal_basis": ortho is OrthonormalKind.BASIS,
            "riesz": cert.is_riesz,
            "frame": bounds.is_frame,
            "tight": flags_frame.tight,
            "parseval": flags_frame.parseval,
            "uniform_weight": flags_frame.uniform_weight,
        },
        "details": {
            "f_basis_reason": fb.reason,
            "minimal_witness": list(minimal.witness),
            "sum_dims": audit.sum_dims,
            "orthonormal_kind": ortho.value,
        },
        "constants": constants,
        "residuals": residuals,
        "tolerances": tol.as_dict(),
        "seed": seed,
    }
    if metadata:
        report["metadata"] = metadata
    return report


def _fmt(v):
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def render_text(report) -> str:
    lines = [
        f"ambient_dim {report['ambient_dim']}, member dims {report['member_dims']}",
        "flags:",
    ]
    for k, v in report["flags"].items():
        lines.append(f"  {k:<20} {_fmt(v)}")
    lines.append("constants:")
    for k, c in report["constants"].items():
        extra = f"  ({c['note']})" if c.get("note") else ""
        lines.append(f"  {k:<7} {_fmt(c['value']):<22} [{c['source']}]{extra}")
    return "\n".join(lines) + "\n"

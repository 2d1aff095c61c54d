"""JSON interchange for systems and operators.

System file::

    {"schema_version": 1, "field": "complex" | "real", "ambient_dim": n,
     "subspaces": [{"weight": w, "basis": [column, ...]}, ...],
     "metadata": {...}}

Columns are lists of numbers (``field = "real"``) or of ``[re, im]`` pairs
(``field = "complex"``). Bases need not be orthonormal; they are
orthonormalized on load. Operator files use the same envelope with a single
``matrix`` key holding a list of rows instead of ``ambient_dim``/``subspaces``.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .core import DEFAULT_TOL, orthonormalize
from .errors import MalformedFile, NonpositiveWeight, ZeroSubspace
from .frame import FusionSystem

__all__ = [
    "SCHEMA_VERSION",
    "parse_system",
    "serialize_system",
    "parse_operator",
    "serialize_operator",
    "dumps",
    "load_json",
]

SCHEMA_VERSION = 1


def load_json(data):
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedFile(f"not UTF-8 text ({exc.reason})", "byte %d" % exc.start) from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedFile(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None


def _number(x, locus):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise MalformedFile(f"expected a finite number, got {x!r}", locus)
    return float(x)


def _scalar(x, field, locus):
    if field == "real":
        return complex(_number(x, locus))
    if not (isinstance(x, list) and len(x) == 2):
        raise MalformedFile(f"complex scalars are [re, im] pairs, got {x!r}", locus)
    return complex(_number(x[0], locus + "[0]"), _number(x[1], locus + "[1]"))


def _envelope(doc):
    if not isinstance(doc, dict):
        raise MalformedFile("top level must be a JSON object", "$")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise MalformedFile(f"unsupported schema_version {version!r}", "schema_version")
    field = doc.get("field")
    if field not in ("complex", "real"):
        raise MalformedFile(f'field must be "complex" or "real", got {field!r}', "field")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise MalformedFile("metadata must be an object", "metadata")
    return field


def _columns(cols, n, field, locus):
    if not isinstance(cols, list) or not cols:
        raise MalformedFile("basis must be a nonempty list of columns", locus)
    out = np.empty((n, len(cols)), dtype=np.complex128)
    for c, col in enumerate(cols):
        where = f"{locus}[{c}]"
        if not isinstance(col, list) or len(col) != n:
            raise MalformedFile(f"each column must have ambient_dim = {n} entries", where)
        for r, x in enumerate(col):
            out[r, c] = _scalar(x, field, f"{where}[{r}]")
    return out


def parse_system(data, tol=DEFAULT_TOL) -> FusionSystem:
    """Parse system JSON (``str`` or ``bytes``).

    Raises
    ------
    MalformedFile
        With a field path or line/column locus.
    ZeroSubspace, NonpositiveWeight
    """
    doc = load_json(data)
    field = _envelope(doc)
    n = doc.get("ambient_dim")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise MalformedFile(f"ambient_dim must be a positive integer, got {n!r}", "ambient_dim")
    subs = doc.get("subspaces")
    if not isinstance(subs, list) or not subs:
        raise MalformedFile("subspaces must be a nonempty list", "subspaces")
    spaces, weights = [], []
    for j, entry in enumerate(subs):
        where = f"subspaces[{j}]"
        if not isinstance(entry, dict):
            raise MalformedFile("each subspace must be an object", where)
        if "weight" not in entry:
            raise MalformedFile("missing weight", where)
        w = _number(entry["weight"], where + ".weight")
        if w <= 0:
            raise NonpositiveWeight(f"{where}.weight: weights must be > 0, got {w!r}")
        raw = _columns(entry.get("basis"), n, field, where + ".basis")
        try:
            spaces.append(orthonormalize(raw, tol, label=entry.get("label")))
        except ZeroSubspace as exc:
            raise ZeroSubspace(f"{where}: {exc}") from None
        weights.append(w)
    return FusionSystem(tuple(spaces), tuple(weights))


def _is_real(arrays):
    return all(not np.any(np.asarray(a).imag) for a in arrays)


def _encode(x, field):
    if field == "real":
        return float(x.real)
    return [float(x.real), float(x.imag)]


def dumps(doc) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def serialize_system(sys: FusionSystem, metadata=None, field=None) -> str:
    """Encode ``sys`` (orthonormal bases, column lists). ``field`` defaults to
    ``"real"`` when every entry is real."""
    bases = [s.basis for s in sys.subspaces]
    field = field or ("real" if _is_real(bases) else "complex")
    subspaces = []
    for s, w in zip(sys.subspaces, sys.weights):
        entry = {
            "weight": w,
            "basis": [[_encode(x, field) for x in s.basis[:, c]] for c in range(s.dim)],
        }
        if s.label:
            entry["label"] = s.label
        subspaces.append(entry)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "field": field,
        "ambient_dim": sys.ambient_dim,
        "subspaces": subspaces,
    }
    if metadata:
        doc["metadata"] = metadata
    return dumps(doc)


def parse_operator(data) -> np.ndarray:
    doc = load_json(data)
    field = _envelope(doc)
    rows = doc.get("matrix")
    if not isinstance(rows, list) or not rows:
        raise MalformedFile("matrix must be a nonempty list of rows", "matrix")
    n = len(rows)
    out = np.empty((n, n), dtype=np.complex128)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise MalformedFile(f"operator must be square ({n} entries per row)", f"matrix[{r}]")
        for c, x in enumerate(row):
            out[r, c] = _scalar(x, field, f"matrix[{r}][{c}]")
    return out


def serialize_operator(matrix, metadata=None) -> str:
    a = np.asarray(matrix, dtype=np.complex128)
    field = "real" if _is_real([a]) else "complex"
    doc = {
        "schema_version": SCHEMA_VERSION,
        "field": field,
        "matrix": [[_encode(x, field) for x in row] for row in a],
    }
    if metadata:
        doc["metadata"] = metadata
    return dumps(doc)

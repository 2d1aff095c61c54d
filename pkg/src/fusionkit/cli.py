"""Command-line interface.

Exit codes: 0 success (or property holds), 1 property fails or the operation
does not apply to the input, 2 usage error, 3 malformed input file,
4 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import redirect_stderr

from .basis import dual_system, f_dual, is_f_basis
from .core import DEFAULT_TOL, Tolerances
from .errors import (
    BadParams,
    FusionError,
    InternalConsistencyError,
    MalformedFile,
    NonpositiveWeight,
    ZeroSubspace,
)
from .frame import frame_bounds, is_complete, is_exact, is_minimal
from .generators import GENERATOR_VERSION, KINDS, RNG_NAME, generate, rotate
from .io import dumps, parse_operator, parse_system, serialize_system
from .perturbation import paley_wiener_global, paley_wiener_subsetwise
from .report import analyze, render_text
from .riesz import OrthonormalKind, orthonormal_classify, riesz_analyze, transform_f_basis

__all__ = ["main", "run_command", "build_parser"]

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_MALFORMED, EXIT_INTERNAL = 0, 1, 2, 3, 4

PROPERTIES = {
    "complete": lambda s, t: is_complete(s, t),
    "minimal": lambda s, t: is_minimal(s, t).minimal,
    "exact": lambda s, t: frame_bounds(s, t).is_frame and is_exact(s, t),
    "f-basis": lambda s, t: is_f_basis(s, t).verdict,
    "orthonormal": lambda s, t: orthonormal_classify(s, t) is not OrthonormalKind.NONE,
    "orthonormal-basis": lambda s, t: orthonormal_classify(s, t) is OrthonormalKind.BASIS,
    "riesz": lambda s, t: riesz_analyze(s, t).is_riesz,
    "frame": lambda s, t: frame_bounds(s, t).is_frame,
}

_INT_PARAMS = {"N", "m", "n"}
_FLOAT_PARAMS = {"cond", "theta"}


class _UsageError(Exception):
    pass


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_system(path, tol):
    try:
        return parse_system(_read(path), tol)
    except (MalformedFile, ZeroSubspace, NonpositiveWeight) as exc:
        raise MalformedFile(f"{path}: {exc}") from None


def _tol(args):
    if getattr(args, "tol", None) is None:
        return DEFAULT_TOL
    return Tolerances(eq_tol=args.tol)


def _cmd_analyze(args):
    tol = _tol(args)
    rep = analyze(_load_system(args.file, tol), tol)
    out = dumps(rep) if args.json else render_text(rep)
    return EXIT_OK, out


def _cmd_check(args):
    tol = _tol(args)
    holds = bool(PROPERTIES[args.property](_load_system(args.file, tol), tol))
    return (EXIT_OK if holds else EXIT_FALSE), f"{args.property}: {'true' if holds else 'false'}\n"


def _cmd_dual(args):
    fd = dual_system(f_dual(_load_system(args.file, DEFAULT_TOL)))
    return EXIT_OK, serialize_system(fd.system, metadata={"derived": "dual_system"})


def _cmd_transform(args):
    sys_ = _load_system(args.file, DEFAULT_TOL)
    try:
        t = parse_operator(_read(args.operator))
    except MalformedFile as exc:
        raise MalformedFile(f"{args.operator}: {exc}") from None
    out = transform_f_basis(f_dual(sys_), t)
    return EXIT_OK, serialize_system(out.system, metadata={"derived": "transform_f_basis"})


def _cmd_perturb(args):
    tol = _tol(args)
    w = _load_system(args.file_w, tol)
    doc = {"schema": "fusionkit.perturbation/1", "tolerances": tol.as_dict()}
    if args.file_v is not None:
        if args.theta is not None:
            raise _UsageError("give either a candidate file or --theta, not both")
        v = _load_system(args.file_v, tol)
    else:
        if args.theta is None:
            raise _UsageError("perturb needs a candidate file or --theta")
        v = rotate(w, args.theta, args.seed, args.mode, tol)
        doc.update(theta=args.theta, seed=args.seed, mode=args.mode, rng=RNG_NAME)
    fd = f_dual(w, tol)
    if args.subsetwise:
        rep = paley_wiener_subsetwise(fd, v, args.max_members, tol)
    else:
        rep = paley_wiener_global(fd, v, tol)
    doc["report"] = rep.as_dict()
    return EXIT_OK, dumps(doc)


def _convert(name, value):
    if name in _INT_PARAMS:
        return int(value)
    if name in _FLOAT_PARAMS:
        return float(value)
    if name == "dims":
        return [int(x) for x in value.split(",") if x]
    if name == "sys":
        return _load_system(value, DEFAULT_TOL)
    return value


def _cmd_generate(args):
    if args.kind not in KINDS:
        raise BadParams(f"unknown generator {args.kind!r}; choose from {', '.join(sorted(KINDS))}")
    names = KINDS[args.kind][1]
    params, positional = {}, []
    for token in args.params:
        if "=" in token:
            key, _, value = token.partition("=")
            params[key] = value
        else:
            positional.append(token)
    if len(positional) > len(names):
        raise BadParams(f"{args.kind} takes at most {len(names)} parameters {names}")
    for name, value in zip(names, positional):
        params.setdefault(name, value)
    try:
        params = {k: _convert(k, v) for k, v in params.items()}
    except ValueError as exc:
        raise BadParams(str(exc)) from None
    if args.mode and args.kind == "rotate":
        params["mode"] = args.mode
    sys_ = generate(args.kind, params, args.seed)
    shown = {k: (v if k != "sys" else "<system>") for k, v in params.items()}
    meta = {
        "generator": args.kind,
        "params": shown,
        "seed": args.seed,
        "rng": RNG_NAME,
        "generator_version": GENERATOR_VERSION,
    }
    return EXIT_OK, serialize_system(sys_, metadata=meta)


def build_parser():
    p = argparse.ArgumentParser(
        prog="fusionkit",
        description="Analyse fusion frames, fusion bases and Riesz fusion bases.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run all applicable checks")
    a.add_argument("file")
    a.add_argument("--tol", type=float, help="equality tolerance (default 1e-8)")
    a.add_argument("--json", action="store_true", help="emit the JSON report")
    a.set_defaults(func=_cmd_analyze)

    c = sub.add_parser("check", help="exit 0 if the property holds, 1 otherwise")
    c.add_argument("property", choices=sorted(PROPERTIES))
    c.add_argument("file")
    c.add_argument("--tol", type=float)
    c.set_defaults(func=_cmd_check)

    d = sub.add_parser("dual", help="emit the dual fusion basis")
    d.add_argument("file")
    d.set_defaults(func=_cmd_dual)

    t = sub.add_parser("transform", help="push a fusion basis through an invertible operator")
    t.add_argument("file")
    t.add_argument("--operator", required=True)
    t.set_defaults(func=_cmd_transform)

    q = sub.add_parser("perturb", help="Paley-Wiener stability certificate")
    q.add_argument("file_w")
    q.add_argument("file_v", nargs="?")
    q.add_argument("--subsetwise", action="store_true")
    q.add_argument("--max-members", type=int, default=12)
    q.add_argument("--theta", type=float)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--mode", choices=("common", "independent"), default="common")
    q.add_argument("--tol", type=float)
    q.set_defaults(func=_cmd_perturb)

    g = sub.add_parser("generate", help="emit a fixture or seeded random system")
    g.add_argument("kind", help=", ".join(sorted(KINDS)))
    g.add_argument("params", nargs="*", help="positional values or key=value pairs")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--mode", choices=("common", "independent"))
    g.set_defaults(func=_cmd_generate)
    return p


def run_command(argv, stderr=None):
    """Run one CLI invocation; returns ``(exit_code, stdout_bytes)``."""
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        with redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), b""
    try:
        code, out = args.func(args)
    except (_UsageError, BadParams) as exc:
        print(f"fusionkit: {exc}", file=stderr)
        return EXIT_USAGE, b""
    except MalformedFile as exc:
        print(f"fusionkit: malformed input: {exc}", file=stderr)
        return EXIT_MALFORMED, b""
    except InternalConsistencyError as exc:
        print(f"fusionkit: internal consistency failure: {exc}", file=stderr)
        return EXIT_INTERNAL, b""
    except FusionError as exc:
        print(f"fusionkit: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_FALSE, b""
    return code, out.encode("utf-8")


def main(argv=None):
    code, out = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())

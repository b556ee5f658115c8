"""Command-line front end.

Every subcommand prints one JSON document (keys sorted, floats with 12
significant digits) or a CSV table. Exit codes: 0 on success, 1 for a failed
certificate or a counterexample under ``--strict`` (and for verification
errors), 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import asymnorm, envelopes, gmls
from .cones import make_cone
from .context import GmlsContext, MixedLatticeContext
from .exceptions import CertificationError, ConelatError, ConvergenceError, ProjectionError
from .numerics import DEFAULT_TOL, Tolerances
from .projection import project
from .report import jsonable

__all__ = ["RunConfig", "run", "main", "dumps"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
_VECTOR_FLAGS = ("--x", "--y", "--w", "--box")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Resolved command-line inputs."""

    command: str
    specific: object = None
    initial: object = None
    vectors: dict = field(default_factory=dict)
    tol: Tolerances = DEFAULT_TOL
    samples: int = 100
    seed: int = 0
    fmt: str = "json"
    output: str | None = None
    strict: bool = False
    probe_box: float = 1e6


# --------------------------------------------------------------------------
# serialization

def _round(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        r = float(f"{obj:.12g}")
        if r == 0.0:
            return 0
        return int(r) if r.is_integer() and abs(r) < 1e15 else r
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round(v) for v in obj]
    return obj


def dumps(obj):
    """Deterministic JSON: sorted keys, floats at 12 significant digits."""
    return json.dumps(_round(jsonable(obj)), sort_keys=True, ensure_ascii=False)


def _csv(obj):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    obj = _round(jsonable(obj))
    if isinstance(obj, dict) and "clauses" in obj:
        cols = ["clause", "description", "asserted", "samples", "failures",
                "worst_residual", "passed"]
        w.writerow(cols)
        for c in obj["clauses"]:
            w.writerow([c[k] for k in cols])
    elif isinstance(obj, dict) and "points" in obj:
        pts = obj["points"]
        w.writerow([f"w{i + 1}" for i in range(len(pts[0]))] if pts else ["w"])
        w.writerows(pts)
    else:
        w.writerow(["key", "value"])
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, list) and all(not isinstance(e, (list, dict)) for e in v):
                v = ";".join(str(e) for e in v)
            elif isinstance(v, (list, dict)):
                v = json.dumps(v, sort_keys=True)
            w.writerow([k, v])
    return buf.getvalue()


# --------------------------------------------------------------------------
# argument handling

def _load_cone(text, tol):
    if text is None:
        return None
    src = text.strip()
    if not src.startswith("{"):
        path = Path(text)
        if not path.is_file():
            raise UsageError(f"cone file not found: {text}")
        src = path.read_text()
    try:
        spec = json.loads(src)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed cone JSON: {exc}") from None
    return make_cone(spec, tol)


def _parse_vector(text, name):
    src = text
    path = Path(text)
    if path.is_file():
        src = path.read_text()
    parts = [p for p in src.replace(",", " ").split() if p]
    try:
        return np.array([float(p) for p in parts], dtype=float)
    except ValueError:
        raise UsageError(f"--{name} must be comma-separated numbers, got {text!r}") from None


def _parse_box(text):
    rows = []
    for chunk in text.split(";"):
        bounds = [float(v) for v in chunk.split(",")]
        if len(bounds) != 2:
            raise UsageError("--box takes 'lo,hi;lo,hi;...'")
        rows.append(bounds)
    return rows


def _fix_negative_values(argv):
    """Join ``--x -1,2`` into ``--x=-1,2`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VECTOR_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--specific", help="specific cone S (file or inline JSON)")
    common.add_argument("--initial", help="initial cone P (default: dual of S)")
    common.add_argument("--x")
    common.add_argument("--y")
    common.add_argument("--w")
    common.add_argument("--samples", type=int, default=100)
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (fallback: $CONELAT_SEED, then 0)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--strict", action="store_true",
                        help="exit 1 on a refuted certificate or counterexample")
    common.add_argument("--feas", type=float, default=DEFAULT_TOL.feas)
    common.add_argument("--opt", type=float, default=DEFAULT_TOL.opt)
    common.add_argument("--zero", type=float, default=DEFAULT_TOL.zero)
    common.add_argument("--probe-box", type=float, default=1e6)

    p = _Parser(prog="conelat", description="Cone projections and mixed envelopes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = sub.add_parser("project", parents=[common], help="project x onto a cone")
    sp.add_argument("--cone", required=True)
    sp = sub.add_parser("envelope", parents=[common], help="x∨y or x∧y")
    sp.add_argument("which", choices=["upper", "lower"])
    sub.add_parser("decompose", parents=[common], help="Moreau split of x")
    sub.add_parser("parts", parents=[common], help="upper and lower parts of x")
    sp = sub.add_parser("minset", parents=[common], help="certified sample of min[x∨y]")
    sp.add_argument("--max-refine", type=int, default=50)
    sp = sub.add_parser("certify", parents=[common], help="extremality certificate for w")
    sp.add_argument("which", choices=["min", "max"])
    sp = sub.add_parser("props", parents=[common], help="sampled identity checkers")
    sp.add_argument("suite", choices=["envelopes", "parts", "gmls"])
    sub.add_parser("detect-ml", parents=[common], help="search for non-unique envelopes")
    for name, text in (("norm-check", "asymmetric norm axioms"),
                       ("isotone", "order preservation of the norm map")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("--which", choices=["SpecificUpper", "Upper"], default="SpecificUpper")
        if name == "norm-check":
            sp.add_argument("--order", choices=["InitialP", "SpecificS"], default="InitialP")
    sp = sub.add_parser("oracle-minset", parents=[common], help="grid oracle for min[x∨y]")
    sp.add_argument("--box", required=True, help="'lo,hi;lo,hi;...' per coordinate")
    sp.add_argument("--step", type=float, default=1.0)
    return p


def _config(args):
    seed = args.seed
    if seed is None:
        env = os.environ.get("CONELAT_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise UsageError(f"CONELAT_SEED must be an integer, got {env!r}") from None
    try:
        tol = Tolerances(feas=args.feas, opt=args.opt, zero=args.zero)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.samples < 0:
        raise UsageError("--samples must be nonnegative")
    spec_src = getattr(args, "cone", None) or args.specific
    vectors = {k: _parse_vector(getattr(args, k), k) for k in ("x", "y", "w")
               if getattr(args, k) is not None}
    return RunConfig(args.command, _load_cone(spec_src, tol), _load_cone(args.initial, tol),
                     vectors, tol, args.samples, seed, args.format, args.output,
                     args.strict, args.probe_box)


def _need(cfg, *names):
    missing = [n for n in names if n not in cfg.vectors]
    if missing:
        raise UsageError(f"{cfg.command} needs " + ", ".join(f"--{n}" for n in missing))
    dim = cfg.specific.dim
    for n in names:
        if cfg.vectors[n].shape[0] != dim:
            raise UsageError(f"--{n} has {cfg.vectors[n].shape[0]} entries; the cone "
                             f"lives in R^{dim}")
    return [cfg.vectors[n] for n in names]


def _context(cfg, gmls_layer=False):
    if cfg.specific is None:
        raise UsageError(f"{cfg.command} needs --specific")
    if gmls_layer:
        return GmlsContext(cfg.specific, cfg.initial, cfg.tol, probe_box=cfg.probe_box)
    return MixedLatticeContext(cfg.specific, cfg.initial, cfg.tol)


# --------------------------------------------------------------------------
# subcommands; each returns (payload, failed)

def _cmd_project(cfg, args):
    if cfg.specific is None:
        raise UsageError("project needs --cone")
    (x,) = _need(cfg, "x")
    r = project(cfg.specific, x, cfg.tol)
    return {"point": r.point, "distance": r.distance}, False


def _cmd_envelope(cfg, args):
    ctx = _context(cfg)
    x, y = _need(cfg, "x", "y")
    op = envelopes.upper_envelope if args.which == "upper" else envelopes.lower_envelope
    return {"op": args.which, "point": op(ctx, x, y)}, False


def _cmd_decompose(cfg, args):
    ctx = _context(cfg)
    (x,) = _need(cfg, "x")
    d = envelopes.moreau_decompose(ctx, x)
    return {"specific_upper": d.specific_upper, "lower": d.lower,
            "orthogonality_residual": d.orthogonality_residual}, False


def _cmd_parts(cfg, args):
    ctx = _context(cfg)
    (x,) = _need(cfg, "x")
    return envelopes.parts(ctx, x)._asdict(), False


def _cmd_minset(cfg, args):
    ctx = _context(cfg, gmls_layer=True)
    x, y = _need(cfg, "x", "y")
    s = gmls.sample_min_set(ctx, x, y, max_refine=args.max_refine)
    return s.to_json(), bool(s.failed_directions)


def _cmd_certify(cfg, args):
    ctx = _context(cfg, gmls_layer=True)
    x, y, w = _need(cfg, "x", "y", "w")
    kind = gmls.ExtremalKind.MINIMAL if args.which == "min" else gmls.ExtremalKind.MAXIMAL
    c = gmls.certify_extremal(ctx, x, y, w, kind)
    return c.to_json(), not c.certified


def _cmd_props(cfg, args):
    if args.suite == "gmls":
        rep = gmls.check_gmls_properties(_context(cfg, gmls_layer=True), cfg.samples, cfg.seed)
    elif args.suite == "envelopes":
        rep = envelopes.check_envelope_identities(_context(cfg), cfg.samples, cfg.seed)
    else:
        rep = envelopes.check_part_identities(_context(cfg), cfg.samples, cfg.seed)
    return rep.to_dict(), not rep.passed


def _cmd_detect(cfg, args):
    r = gmls.detect_mixed_lattice(_context(cfg, gmls_layer=True), cfg.samples, cfg.seed)
    return r.to_json(), r.is_mixed_lattice_refuted


def _cmd_norm(cfg, args):
    r = asymnorm.check_axioms(_context(cfg), args.which, cfg.samples, cfg.seed, args.order)
    return r.to_dict(), not r.passed


def _cmd_isotone(cfg, args):
    rep = asymnorm.check_isotone(_context(cfg), args.which, cfg.samples, cfg.seed)
    return rep.to_dict(), rep.total_failures > 0


def _cmd_oracle(cfg, args):
    ctx = _context(cfg, gmls_layer=True)
    x, y = _need(cfg, "x", "y")
    box = _parse_box(args.box)
    if len(box) != ctx.dim:
        raise UsageError(f"--box needs {ctx.dim} intervals")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", gmls.OracleWarning)
        pts = gmls.brute_force_min_set(ctx, x, y, box, args.step)
    return {"points": pts, "empty": bool(caught) and pts.shape[0] == 0}, False


_COMMANDS = {
    "project": _cmd_project, "envelope": _cmd_envelope, "decompose": _cmd_decompose,
    "parts": _cmd_parts, "minset": _cmd_minset, "certify": _cmd_certify,
    "props": _cmd_props, "detect-ml": _cmd_detect, "norm-check": _cmd_norm,
    "isotone": _cmd_isotone, "oracle-minset": _cmd_oracle,
}


def _run(argv):
    try:
        args = _build_parser().parse_args(_fix_negative_values(list(argv)))
        cfg = _config(args)
        payload, failed = _COMMANDS[cfg.command](cfg, args)
    except UsageError as exc:
        return EXIT_USAGE, f"error: {exc}", None
    except (CertificationError, ProjectionError, ConvergenceError) as exc:
        return EXIT_FAIL, f"error: {exc}", None
    except (ConelatError, ValueError) as exc:
        return EXIT_USAGE, f"error: {exc}", None
    text = _csv(payload) if cfg.fmt == "csv" else dumps(payload) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    return (EXIT_FAIL if cfg.strict and failed else EXIT_OK), text, cfg.output


def run(argv):
    """Run one command.

    Returns
    -------
    tuple of (int, str)
        Exit code and the serialized report (or an ``error: ...`` message).
    """
    code, text, _ = _run(argv)
    return code, text


def main(argv=None):
    code, text, output = _run(sys.argv[1:] if argv is None else argv)
    if text.startswith("error:"):
        sys.stderr.write(text + "\n")
    elif output is None:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

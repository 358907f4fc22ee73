"""Command line front end.

Every subcommand reads a JSON job, writes a JSON report that echoes the job,
and exits with 0 (ok), 1 (verification failure), 2 (bad input or unmet
precondition) or 3 (a size cap was exceeded).  Errors go to stderr as JSON.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import caps
from .cst import fixed_subring, reduce_twists, twist_group
from .errors import ArtifactError, CapExceeded, InputError
from .pink_lie import decompose_lie, level_detector, pink_filtration
from .rep_core import MatrixRep, mat_from_json, mat_to_json
from .residual_analysis import analyze
from .ring_core import RingSpec, make_ring

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


# ---------------------------------------------------------------- input

def load_json_arg(text):
    """Inline JSON, '-' for stdin, or a path to a JSON file."""
    if text is None:
        raise InputError("missing --input")
    stripped = text.lstrip()
    try:
        if text == "-":
            return json.load(sys.stdin)
        if stripped.startswith(("{", "[")):
            return json.loads(text)
        if not os.path.exists(text):
            raise InputError(f"input file not found: {text}")
        with open(text) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno)


def parse_caps(text):
    out = {}
    if not text:
        return out
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in caps.DEFAULTS:
            raise InputError(f"bad cap '{item}'; expected name=value with name in "
                             f"{sorted(caps.DEFAULTS)}")
        try:
            out[key] = int(val)
        except ValueError:
            raise InputError(f"cap {key} must be an integer")
        if out[key] < 1:
            raise InputError(f"cap {key} must be positive")
    return out


def parse_job(obj, need_depth=False, depth=None):
    """Validate a representation job; returns (normalized job, ring, rep)."""
    if not isinstance(obj, dict):
        raise InputError("job must be a JSON object")
    if "ring" not in obj:
        raise InputError("job needs a ring")
    spec = RingSpec.from_json(obj["ring"])
    R = make_ring(spec)
    gens = obj.get("generators", [])
    if not isinstance(gens, list):
        raise InputError("generators must be a list of matrices")
    mats = [mat_from_json(R, g) for g in gens]
    job = {"ring": spec.to_json(), "generators": [mat_to_json(R, X) for X in mats]}
    if "labels" in obj:
        labels = obj["labels"]
        if not isinstance(labels, list) or len(labels) != len(mats) \
                or not all(isinstance(s, str) for s in labels):
            raise InputError("labels must be one string per generator")
        job["labels"] = labels
    if need_depth:
        d = depth if depth is not None else obj.get("depth")
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise InputError("depth must be a positive integer")
        job["depth"] = d
    rep = MatrixRep.from_generators(R, np.array(mats, dtype=np.int64).reshape(-1, 4))
    return job, R, rep


def parse_conjugators(R, text):
    if text is None:
        return None
    obj = load_json_arg(text)
    if not isinstance(obj, list):
        raise InputError("conjugators must be a list of matrices")
    out = [mat_from_json(R, m) for m in obj]
    if not all(bool(R.is_unit(int(R.sub(R.mul(x[0], x[3]), R.mul(x[1], x[2]))))) for x in out):
        raise InputError("conjugators must be invertible")
    return out


# ---------------------------------------------------------------- commands

def _elems(R, xs):
    return [R.to_list(int(v)) for v in xs]


def run_analyze(args):
    job, R, rep = parse_job(load_json_arg(args.input))
    if R.n != 1 or R.e != 1:
        raise InputError("analyze needs a finite field (n = 1, no extension)")
    return job, analyze(rep), EXIT_OK


def run_pinklie(args):
    job, R, rep = parse_job(load_json_arg(args.input), need_depth=True, depth=args.depth)
    Ls = pink_filtration(rep.image_group(), job["depth"])
    levels = []
    for k, L in enumerate(Ls, start=1):
        dec = decompose_lie(L)
        entry = {"level": k, "cardinality": int(L.size),
                 "decomposable": dec.decomposable, "strong": dec.strong}
        for name in ("I", "B", "C"):
            part = getattr(dec, name)
            entry[name] = _elems(R, part.basis()) if part is not None else None
        levels.append(entry)
    return job, {"levels": levels}, EXIT_OK


def run_cst(args):
    job, R, rep = parse_job(load_json_arg(args.input))
    tg = twist_group(rep.pseudorep())
    red = reduce_twists(tg)
    result = {"pairs": tg.to_json(),
              "abelian": tg.sigma_abelian(),
              "kernel_size": len(red.kernel),
              "fixed_subring_basis": _elems(R, fixed_subring(R, tg.sigmas()).basis())}
    return job, result, EXIT_OK


def run_level(args):
    job, R, rep = parse_job(load_json_arg(args.input))
    conj = parse_conjugators(R, args.conjugators)
    if conj is not None:
        job["conjugators"] = [mat_to_json(R, x) for x in conj]
    res = level_detector(rep.image_group(), conjugators=conj)
    result = {"subring": _elems(R, res.subring.basis()),
              "level_ideal_generators": _elems(R, res.generators),
              "conjugator_used": mat_to_json(R, res.conjugator)}
    return job, result, EXIT_OK


def run_verify(args):
    from .verify import run_suite
    job = {"filter": args.filter, "perturb": bool(args.perturb)}
    echo = (lambda line: print(line, file=sys.stderr)) if args.verbose else None
    results = run_suite(pattern=args.filter, perturb=args.perturb, echo=echo)
    rows = [{"id": r.id, "criterion": r.criterion, "ok": r.ok, "detail": r.detail}
            for r in results]
    passed = sum(r.ok for r in results)
    result = {"instances": rows, "passed": passed, "failed": len(results) - passed}
    return job, result, EXIT_OK if passed == len(results) else EXIT_FAIL


COMMANDS = {"analyze": run_analyze, "pinklie": run_pinklie, "cst": run_cst,
            "level": run_level, "verify": run_verify}


# ---------------------------------------------------------------- output

def _plain(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (set, frozenset, tuple)):
        return sorted(v) if isinstance(v, (set, frozenset)) else list(v)
    return str(v)


def dumps(obj):
    """Byte-stable JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_plain) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(prog="artifact",
                                     description="Residual and deformation analysis of "
                                                 "2-dimensional representations of finite groups.")
    parser.add_argument("--caps", help="enumeration limits, e.g. ring=4096,group=100000")
    parser.add_argument("--output", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("analyze", "pinklie", "cst", "level"):
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="JSON job: inline, a path, or '-'")
        if name == "pinklie":
            p.add_argument("--depth", type=int, help="number of filtration steps")
        if name == "level":
            p.add_argument("--conjugators", help="JSON list of matrices to conjugate by")
    p = sub.add_parser("verify")
    p.add_argument("--filter", help="regular expression on instance ids")
    p.add_argument("--perturb", action="store_true",
                   help="corrupt one ring multiplication entry; the suite must then fail")
    p.add_argument("--verbose", action="store_true", help="print one line per instance")
    for p in sub.choices.values():
        p.add_argument("--caps", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        p.add_argument("--output", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        with caps.override(**parse_caps(args.caps)):
            job, result, code = COMMANDS[args.command](args)
    except CapExceeded as exc:
        sys.stderr.write(dumps(exc.as_dict()))
        return EXIT_CAP
    except ArtifactError as exc:
        sys.stderr.write(dumps(exc.as_dict()))
        return EXIT_FAIL if exc.kind == "not_a_group" else EXIT_INPUT
    report = {"command": args.command, "job": job, "result": result}
    text = dumps(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

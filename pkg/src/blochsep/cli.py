"""Command-line front end.

Commands (all emit JSON on stdout or ``--output``):

* ``decompose``   correlation tensors of a state spec, optionally one subset
* ``reconstruct`` density matrix rebuilt from a ``decompose`` document
* ``bounds``      full-system bound and every block factor for a dims profile
* ``classify``    separability exclusion report for a state spec
* ``thresholds``  critical mixing parameters for a white-noise family spec
* ``examples``    built-in regression families 1 and 2, swept and checked

Party indices are 1-based on the command line and in reports.  Exit status:
0 success, 1 regression-check failure (``examples``), 2 validation errors
with a machine-readable error object.  ``BLOCHSEP_TOLERANCE`` overrides the
default validation tolerance; the ``--tolerance`` flag wins over it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from itertools import combinations

import numpy as np

from . import __version__
from .bloch import CorrelationTensor, all_tensors, correlation_tensor, reconstruct
from .bounds import block_factor, multi_factor
from .classifier import classify, noise_thresholds
from .errors import BlochSepError, DomainError
from .examples import example_family
from .states import DimsProfile, family_from_spec, state_from_spec
from .surd import as_surd

ENV_TOLERANCE = "BLOCHSEP_TOLERANCE"
DEFAULT_TOLERANCE = 1e-9
THRESHOLD_ATOL = 1e-12
NORM_RTOL = 1e-9

EXAMPLE1_THRESHOLDS = {
    "(1,1,1,1,1)": math.sqrt(5) / 10,
    "(1,1,1,2)": math.sqrt(15) / 10,
    "(1,1,3)": math.sqrt(5) / 5,
    "(1,2,2)": 3 * math.sqrt(5) / 10,
    "(1,4)": 3 * math.sqrt(5) / 10,
    "(2,3)": math.sqrt(15) / 5,
}
EXAMPLE2_THRESHOLDS = {
    "(1,1,1,1)": 2 * math.sqrt(30) / 15,
    "(1,1,2)": math.sqrt(30) / 6,
    "(2,2)": math.sqrt(30) / 4,
    "(1,3)": math.sqrt(52 / 45),
}
EXAMPLE_COEFF = {1: 20.0, 2: 6.0}
EXAMPLE_SWEEP = {1: (0.1, 0.25, 0.4, 0.49), 2: (0.1, 0.5, 0.8, 1.0)}
EXAMPLE2_VACUOUS = ("(2,2)", "(1,3)")


def _emit(document: dict, output: str | None) -> None:
    text = json.dumps(document, indent=2) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_spec(args) -> dict:
    if getattr(args, "spec", None) is not None:
        return json.loads(args.spec)
    if getattr(args, "input", None) is not None:
        with open(args.input) as fh:
            return json.load(fh)
    return json.load(sys.stdin)


def _tolerance(args) -> float:
    if getattr(args, "tolerance", None) is not None:
        return args.tolerance
    env = os.environ.get(ENV_TOLERANCE)
    if env is not None:
        try:
            return float(env)
        except ValueError:
            raise DomainError(f"{ENV_TOLERANCE} must be a number, got {env!r}")
    return DEFAULT_TOLERANCE


def _parse_int_list(text: str, what: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise DomainError(f"{what} must be a comma-separated list of integers, got {text!r}")
    if not values:
        raise DomainError(f"{what} must not be empty")
    return values


def _tensor_jsonable(t: CorrelationTensor) -> dict:
    return {
        "subset": [i + 1 for i in t.subset],
        "shape": list(t.shape),
        "entries": [float(v) for v in t.entries.ravel()],
        "norm_sq": t.norm_sq,
    }


def _cmd_decompose(args) -> int:
    state = state_from_spec(_load_spec(args), atol=_tolerance(args))
    if args.subset:
        subset = tuple(i - 1 for i in _parse_int_list(args.subset, "--subset"))
        tensors = [correlation_tensor(state, subset)]
    else:
        tensors = list(all_tensors(state).values())
    _emit({"dims": list(state.dims), "tensors": [_tensor_jsonable(t) for t in tensors]}, args.output)
    return 0


def _cmd_reconstruct(args) -> int:
    doc = _load_spec(args)
    profile = DimsProfile(tuple(doc["dims"]))
    tensors = {}
    for item in doc["tensors"]:
        subset = tuple(sorted(int(i) - 1 for i in item["subset"]))
        entries = np.asarray(item["entries"], dtype=float).reshape(tuple(item["shape"]))
        entries.setflags(write=False)
        tensors[subset] = CorrelationTensor(
            subset=subset, entries=entries, norm_sq=float(item["norm_sq"])
        )
    state = reconstruct(tensors, profile)
    matrix = [[[float(z.real), float(z.imag)] for z in row] for row in state.matrix]
    _emit({"dims": list(profile.dims), "matrix": matrix}, args.output)
    return 0


def _cmd_bounds(args) -> int:
    dims = _parse_int_list(args.dims, "--dims")
    notes = []
    if list(dims) != sorted(dims):
        notes.append("dimensions reordered ascending for bound evaluation")
        dims = tuple(sorted(dims))
    profile = DimsProfile(dims)
    n = profile.n_parties

    if n >= 3 and dims[-1] <= math.prod(dims[:-1]):
        full = multi_factor(dims)
    else:
        full = None
        if n >= 3:
            notes.append(
                "full-system bound unavailable: the largest dimension exceeds the product of the others"
            )
        else:
            notes.append("full-system bound needs at least three parties")

    seen = {}
    for size in range(1, max(n, 2)):
        for subset in combinations(range(n), size):
            block = tuple(sorted(dims[i] for i in subset))
            if block in seen:
                continue
            if size >= 3 and block[-1] > math.prod(block[:-1]):
                seen[block] = {"dims": list(block), "size": size, "rule": "multi",
                               "value": None, "constraint_ok": False}
            else:
                f = block_factor(block)
                seen[block] = {"dims": list(block), "size": size, "rule": f.rule,
                               "value": f.value, "constraint_ok": True}
    factors = [seen[k] for k in sorted(seen)]
    _emit({"dims": list(dims), "full_bound": full, "block_factors": factors, "notes": notes},
          args.output)
    return 0


def _cmd_classify(args) -> int:
    state = state_from_spec(_load_spec(args), atol=_tolerance(args))
    report = classify(state)
    _emit(report.to_jsonable(mode=args.mode), args.output)
    return 0


def _cmd_thresholds(args) -> int:
    family = family_from_spec(_load_spec(args), atol=_tolerance(args))
    table = noise_thresholds(family)
    _emit(table.to_jsonable(mode=args.mode), args.output)
    return 0


def _check(checks: list, name: str, ok: bool, detail: str | None = None) -> None:
    entry = {"name": name, "ok": bool(ok)}
    if detail:
        entry["detail"] = detail
    checks.append(entry)


def _cmd_examples(args) -> int:
    example_id = args.id
    family = example_family(example_id)
    table = noise_thresholds(family)
    expected = EXAMPLE1_THRESHOLDS if example_id == 1 else EXAMPLE2_THRESHOLDS
    c_expected = EXAMPLE_COEFF[example_id]
    checks: list[dict] = []

    _check(checks, "coefficient", abs(table.coefficient - c_expected) <= NORM_RTOL * c_expected,
           f"measured {table.coefficient!r}, expected {c_expected}")

    rows = {r.shape.render(): r for r in table.rows}
    for shape_str, x_expected in expected.items():
        row = rows.get(shape_str)
        if row is None or row.x_star_contiguous is None:
            _check(checks, f"threshold {shape_str}", False, "missing")
            continue
        ok = abs(row.x_star_contiguous - x_expected) <= THRESHOLD_ATOL
        _check(checks, f"threshold {shape_str}", ok,
               f"measured {row.x_star_contiguous!r}, expected {x_expected!r}")

    if example_id == 1:
        a, b = rows["(1,2,2)"], rows["(1,4)"]
        _check(checks, "shared threshold (1,2,2) == (1,4)",
               a.x_star_contiguous is not None and b.x_star_contiguous is not None
               and abs(a.x_star_contiguous - b.x_star_contiguous) <= THRESHOLD_ATOL)
    else:
        for shape_str in EXAMPLE2_VACUOUS:
            _check(checks, f"vacuous {shape_str}", bool(rows[shape_str].vacuous_contiguous),
                   f"x* exceeds x_max = {table.x_max!r}")
        _check(checks, "(1,3) variant note present",
               any("sqrt(263)/15" in note for note in table.notes))

    sweep = []
    for x in EXAMPLE_SWEEP[example_id]:
        if x > family.x_max:
            sweep.append({"x": x, "skipped": "outside positivity range"})
            continue
        state = family.state_at(x)
        report = classify(state)
        expected_norm = c_expected * x * x
        ok = abs(report.norm_sq - expected_norm) <= NORM_RTOL * expected_norm
        _check(checks, f"norm at x={x}", ok,
               f"measured {report.norm_sq!r}, expected {expected_norm!r}")
        expected_excluded = sorted(s for s, x_star in expected.items() if x > x_star)
        got_excluded = sorted(s.render() for s in report.excluded_shapes(mode="contiguous"))
        _check(checks, f"excluded set at x={x}", got_excluded == expected_excluded,
               f"got {got_excluded}, expected {expected_excluded}")
        sweep.append({
            "x": x,
            "norm_sq": report.norm_sq,
            "expected_norm_sq": expected_norm,
            "excluded_contiguous": got_excluded,
            "excluded_any": sorted(s.render() for s in report.excluded_shapes(mode="any")),
        })

    passed = all(c["ok"] for c in checks)
    document = {
        "id": example_id,
        "pass": passed,
        "c": table.coefficient,
        "x_max": table.x_max,
        "thresholds": table.to_jsonable(mode="both")["shapes"],
        "sweep": sweep,
        "checks": checks,
        "notes": list(table.notes),
    }
    _emit(document, args.output)
    return 0 if passed else 1


def _add_io_flags(parser: argparse.ArgumentParser, needs_input: bool = True) -> None:
    if needs_input:
        group = parser.add_mutually_exclusive_group()
        group.add_argument("--input", help="path to a JSON document")
        group.add_argument("--spec", help="inline JSON document")
    parser.add_argument("--output", help="write the report here instead of stdout")
    parser.add_argument("--tolerance", type=float, default=None,
                        help=f"state validation tolerance (default {DEFAULT_TOLERANCE}, "
                             f"env {ENV_TOLERANCE})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blochsep", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="correlation tensors of a state spec")
    p.add_argument("--subset", help="1-based party indices, e.g. 1,2,3 (default: all subsets)")
    _add_io_flags(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("reconstruct", help="rebuild the density matrix from a decompose document")
    _add_io_flags(p)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("bounds", help="full-system bound and block factors for a dims profile")
    p.add_argument("--dims", required=True, help="comma-separated local dimensions, e.g. 2,3,4,5")
    _add_io_flags(p, needs_input=False)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("classify", help="separability exclusion report for a state spec")
    p.add_argument("--mode", choices=("contiguous", "max", "both"), default="both")
    _add_io_flags(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("thresholds", help="critical mixing parameters for a family spec")
    p.add_argument("--mode", choices=("contiguous", "max", "both"), default="both")
    _add_io_flags(p)
    p.set_defaults(func=_cmd_thresholds)

    p = sub.add_parser("examples", help="run a built-in regression family")
    p.add_argument("--id", type=int, required=True, choices=(1, 2))
    _add_io_flags(p, needs_input=False)
    p.set_defaults(func=_cmd_examples)

    return parser


def _error_document(kind: str, message: str, **extra) -> dict:
    err = {"kind": kind, "message": message}
    err.update(extra)
    return {"error": err}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        _emit(_error_document("json", exc.msg, line=exc.lineno, column=exc.colno,
                              position=exc.pos), getattr(args, "output", None))
        return 2
    except BlochSepError as exc:
        kind = type(exc).__name__.removesuffix("Error").lower()
        _emit(_error_document(kind, str(exc)), getattr(args, "output", None))
        return 2
    except (KeyError, TypeError, ValueError) as exc:
        _emit(_error_document("spec", f"malformed document: {exc}"), getattr(args, "output", None))
        return 2
    except OSError as exc:
        _emit(_error_document("io", str(exc)), None)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

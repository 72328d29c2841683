"""Command-line front end.  Every command prints one JSON report.

Exit codes: 0 success, 1 verification failure, 2 method inapplicable or no
solution, 3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import sys
import time
from fractions import Fraction
from typing import Sequence

from . import double_equation as dq
from . import parametrizations as pz
from .exact_math import fmt_rat, to_rat
from .local_solubility import (
    DEFAULT_PRECISION,
    DiagConic,
    candidate_bad_primes,
    conic_soluble,
    local_obstructions,
)
from .surfaces import RatPoint, equation_checks, surface, witness_solve

EXIT_OK, EXIT_UNVERIFIED, EXIT_INAPPLICABLE, EXIT_INVALID = 0, 1, 2, 3


class InvalidInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def _rat(text: str) -> Fraction:
    try:
        return to_rat(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InvalidInput(f"not an exact rational: {text!r}") from exc


def _rat_list(text: str, n: int | None = None) -> list[Fraction]:
    items = [_rat(t) for t in text.split(",")]
    if n is not None and len(items) != n:
        raise InvalidInput(f"expected {n} comma-separated rationals, got {len(items)}")
    return items


def precision_from_env() -> int:
    raw = os.environ.get("DIOPH_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    try:
        k = int(raw)
    except ValueError:
        raise InvalidInput(f"DIOPH_PRECISION must be a positive integer, got {raw!r}") from None
    if k < 1:
        raise InvalidInput("DIOPH_PRECISION must be at least 1")
    return k


def _point_json(pt: dq.CurvePoint) -> dict:
    out: dict = {"projective": [str(c) for c in pt.coords]}
    if not pt.at_infinity:
        out.update({"x": fmt_rat(pt.x), "u": fmt_rat(pt.u), "v": fmt_rat(pt.v)})
    return out


def _curve_checks(de: dq.DoubleEquation, pt: dq.CurvePoint) -> list[bool]:
    return [r == 0 for r in de.residuals(pt)]


def _build_parser() -> _Parser:
    parser = _Parser(prog="dioph", description="Exact constructions on Diophantus' surfaces.")
    parser.add_argument("--batch", metavar="FILE", help="run one command per line of FILE")
    parser.add_argument("--timing", action="store_true", help="report elapsed milliseconds on stderr")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("param", help="run a parametrization engine")
    p.add_argument("problem", choices=list(pz.ENGINES))
    for flag in ("lambda", "mu", "a", "t", "t0", "n", "l0", "m0", "p", "q", "c"):
        p.add_argument(f"--{flag}", dest=f"arg_{flag}")
    p.add_argument("--positive", action="store_true", help="flag whether every coordinate is positive")

    p = sub.add_parser("verify", help="check a point against a surface")
    p.add_argument("problem")
    p.add_argument("coords", nargs="+", metavar="VAR=VALUE")
    p.add_argument("--n", help="given number for IV32 (default 6)")
    p.add_argument("--solve-witnesses", action="store_true", help="fill missing square/cube roots")
    p.add_argument("--positive", action="store_true")

    p = sub.add_parser("doubleeq", help="classify, solve or iterate a double equation")
    p.add_argument("--c", dest="coeffs", required=True, help="a1,b1,c1,a2,b2,c2")
    p.add_argument("action", choices=["classify", "solve", "iterate"])
    p.add_argument("--factors", help="f,g splitting a constant difference (first-order equations)")
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--sign", type=int, choices=[1, -1], default=1, help="aim at (1:a:a:0) or (1:-a:-a:0)")
    p.add_argument("--start", help="affine start point x,u,v for iterate")
    p.add_argument("--positive", action="store_true")

    p = sub.add_parser("conic", help="solubility of a X^2 + b Y^2 + c Z^2 = 0")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")

    p = sub.add_parser("reduce", help="reduce a point of a double equation modulo a prime")
    p.add_argument("--c", dest="coeffs", required=True)
    p.add_argument("--point", help="affine x,u,v")
    p.add_argument("--proj", help="projective X,U,V,Z")
    p.add_argument("--prime", type=int, required=True)
    return parser


# --------------------------------------------------------------------------
# commands; each returns (inputs, outputs, verified, exit_code)


def _cmd_param(args):
    fn, names = pz.ENGINES[args.problem]
    inputs = {}
    for name in names:
        raw = getattr(args, f"arg_{name}")
        if raw is not None:
            inputs[name] = _rat(raw)
    missing = [n for n in names if n not in inputs and not (args.problem == "IV32" and n in ("n", "l0", "m0"))]
    if missing:
        raise InvalidInput(f"{args.problem} needs --{' --'.join(missing)}")
    kwargs = {("lam" if k == "lambda" else k): v for k, v in inputs.items()}
    pt = fn(**kwargs)
    S = surface(args.problem, n=inputs.get("n", 6)) if args.problem == "IV32" else surface(args.problem)
    checks = equation_checks(S, pt)
    outputs = {"point": pt.as_strings()}
    if args.positive:
        outputs["admissible"] = pt.is_positive()
    return {k: fmt_rat(v) for k, v in inputs.items()}, outputs, checks


def _cmd_verify(args):
    coords = {}
    for item in args.coords:
        if "=" not in item:
            raise InvalidInput(f"coordinate {item!r} is not VAR=VALUE")
        k, v = item.split("=", 1)
        coords[k.strip()] = _rat(v)
    try:
        S = surface(args.problem, n=_rat(args.n)) if args.n else surface(args.problem)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    unknown = set(coords) - set(S.variables)
    if unknown:
        raise InvalidInput(f"{S.name} has no variables {sorted(unknown)}")
    pt = RatPoint(coords)
    if args.solve_witnesses:
        try:
            done = witness_solve(S, coords)
        except KeyError as exc:
            raise InvalidInput(str(exc)) from exc
        if done is None:
            return {k: fmt_rat(v) for k, v in coords.items()}, {"completed": False}, [False] * len(S.equations)
        pt = done
    missing = [v for v in S.variables if v not in pt]
    if missing:
        raise InvalidInput(f"missing coordinates {missing}; pass --solve-witnesses to fill them")
    outputs = {"point": pt.as_strings()}
    if args.positive:
        outputs["admissible"] = pt.is_positive()
    return {k: fmt_rat(v) for k, v in coords.items()}, outputs, equation_checks(S, pt)


def _classification_json(cls: dq.DoubleEqClass) -> dict:
    out = {
        "heath_case": cls.heath_case,
        "genus": cls.genus,
        "smooth": cls.smooth,
        "reducible": cls.reducible,
        "first_order": cls.first_order,
        "alpha1": None if cls.alpha1 is None else fmt_rat(cls.alpha1),
        "alpha2": None if cls.alpha2 is None else fmt_rat(cls.alpha2),
    }
    if cls.difference_factors is not None:
        out["difference_factors"] = [str(f) for f in cls.difference_factors]
    else:
        out["difference_factors"] = None
    return out


def _cmd_doubleeq(args):
    try:
        de = dq.DoubleEquation.from_coeffs(_rat_list(args.coeffs, 6))
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    inputs = {"coefficients": [fmt_rat(c) for c in de.coeffs], "action": args.action}
    cls = dq.classify(de)
    if args.action == "classify":
        return inputs, {"classification": _classification_json(cls)}, []
    if args.action == "solve":
        factors = _rat_list(args.factors, 2) if args.factors else None
        if factors:
            inputs["factors"] = [fmt_rat(f) for f in factors]
        try:
            pt = dq.solve(de, factors=factors, sign=args.sign)
        except dq.MethodInapplicable as exc:
            return inputs, _inapplicable(de, exc), None
        outputs = {"point": _point_json(pt)}
        if args.positive:
            outputs["admissible"] = dq.is_admissible(pt)
        return inputs, outputs, _curve_checks(de, pt)
    # iterate
    if args.steps < 0:
        raise InvalidInput("--steps must be nonnegative")
    inputs["steps"] = args.steps
    if args.start:
        start = dq.CurvePoint.affine(*_rat_list(args.start, 3))
        if not de.contains(start):
            raise InvalidInput(f"start point {start} is not on the curve")
    else:
        inf = dq.points_at_infinity(de)
        if not inf:
            exc = dq.MethodInapplicable("no start point", "no rational point at infinity; pass --start")
            return inputs, _inapplicable(de, exc), None
        start = inf["P1"] if args.sign > 0 else inf["P2"]
    inputs["start"] = _point_json(start)
    iterates, checks = [], []
    try:
        for pt in dq.fermat_iterates(de, start, args.steps):
            ok = _curve_checks(de, pt)
            entry = {"point": _point_json(pt), "verified": ok}
            if args.positive:
                entry["admissible"] = dq.is_admissible(pt)
            iterates.append(entry)
            checks.extend(ok)
    except dq.DegenerateSecant as exc:
        return inputs, _inapplicable(de, dq.MethodInapplicable("degenerate secant", str(exc))), None
    outputs = {
        "iterates": iterates,
        "fermat_coefficients": [dq.fermat_coefficient(n) for n in range(args.steps + 1)],
    }
    return inputs, outputs, checks


def _inapplicable(de: dq.DoubleEquation, exc: dq.MethodInapplicable) -> dict:
    k = precision_from_env()
    primes = candidate_bad_primes(de)
    bad = local_obstructions(de, primes, k)
    reason = exc.reason
    if bad:
        reason += "; locally insoluble at " + ", ".join(map(str, bad))
    return {
        "error": "method inapplicable",
        "reason": reason,
        "detail": exc.detail,
        "local_obstructions": bad,
        "primes_checked": primes,
        "precision": k,
    }


def _cmd_conic(args):
    try:
        coef = [int(_rat(v)) if _rat(v).denominator == 1 else None for v in (args.a, args.b, args.c)]
        if None in coef:
            raise ValueError("coefficients must be integers")
        C = DiagConic(*coef)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    res = conic_soluble(C)
    inputs = {"a": str(C.a), "b": str(C.b), "c": str(C.c)}
    norm = res.normalized
    outputs = {"soluble": res.soluble, "normalized": [norm.a, norm.b, norm.c]}
    if res.soluble:
        outputs["witness"] = list(res.witness)
        return inputs, outputs, [C(*res.witness) == 0]
    outputs["obstructions"] = list(res.obstructions)
    return inputs, outputs, None


def _cmd_reduce(args):
    try:
        de = dq.DoubleEquation.from_coeffs(_rat_list(args.coeffs, 6))
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    if bool(args.point) == bool(args.proj):
        raise InvalidInput("give exactly one of --point and --proj")
    if args.point:
        pt = dq.CurvePoint.affine(*_rat_list(args.point, 3))
    else:
        try:
            pt = dq.CurvePoint.projective(*_rat_list(args.proj, 4))
        except ValueError as exc:
            raise InvalidInput(str(exc)) from exc
    if not de.contains(pt):
        raise InvalidInput(f"{pt} is not on the curve")
    inputs = {"coefficients": [fmt_rat(c) for c in de.coeffs], "point": _point_json(pt), "prime": args.prime}
    try:
        red = dq.reduce_point_mod_p(de, pt, args.prime)
    except dq.BadReduction as exc:
        return inputs, {"error": "bad reduction", "reason": str(exc), "good_reduction": False}, None
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    matches = [
        name
        for name, q in dq.points_at_infinity(de).items()
        if dq.projectively_equal_mod_p(red, dq.reduce_point_mod_p(de, q, args.prime), args.prime)
    ]
    outputs = {"good_reduction": True, "reduced": list(red), "reduces_to_infinity": matches}
    return inputs, outputs, [True]


COMMANDS = {
    "param": _cmd_param,
    "verify": _cmd_verify,
    "doubleeq": _cmd_doubleeq,
    "conic": _cmd_conic,
    "reduce": _cmd_reduce,
}


def run(argv: Sequence[str]) -> tuple[dict, int]:
    """Execute one command line; returns the report and the exit code."""
    argv = list(argv)
    report: dict = {"command": " ".join(argv), "inputs": {}, "outputs": {}, "verified": [], "verified_all": False}
    try:
        args = _build_parser().parse_args(argv)
        if args.command is None:
            raise InvalidInput("a subcommand is required")
        inputs, outputs, checks = COMMANDS[args.command](args)
    except InvalidInput as exc:
        report["outputs"] = {"error": "invalid input", "reason": str(exc)}
        code = EXIT_INVALID
    except (pz.ExcludedParameter, dq.DegenerateSecant) as exc:
        report["outputs"] = {"error": "excluded parameter", "reason": str(exc)}
        code = EXIT_INAPPLICABLE
    except dq.MethodInapplicable as exc:
        report["outputs"] = {"error": "method inapplicable", "reason": str(exc)}
        code = EXIT_INAPPLICABLE
    except (ValueError, ZeroDivisionError) as exc:
        report["outputs"] = {"error": "precondition failed", "reason": str(exc)}
        code = EXIT_INAPPLICABLE
    else:
        report["inputs"], report["outputs"] = inputs, outputs
        if checks is None:
            code = EXIT_INAPPLICABLE
        else:
            report["verified"] = checks
            code = EXIT_OK if all(checks) else EXIT_UNVERIFIED
        report["verified_all"] = code == EXIT_OK
    report["exit_code"] = code
    return report, code


def _run_batch(path: str) -> int:
    worst = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            report, code = run(shlex.split(line))
            print(json.dumps(report, separators=(",", ":")))
            worst = max(worst, code)
    return worst


def main(argv: Sequence[str] | None = None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        # Fermat iterates reach tens of thousands of digits
        sys.set_int_max_str_digits(0)
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.perf_counter()
    if argv[:1] == ["--batch"] or (argv and argv[0].startswith("--batch=")):
        path = argv[1] if argv[0] == "--batch" else argv[0].split("=", 1)[1]
        code = _run_batch(path)
    else:
        timing = "--timing" in argv
        argv = [a for a in argv if a != "--timing"]
        report, code = run(argv)
        print(json.dumps(report, indent=2))
        if timing:
            print(f"timing_ms={(time.perf_counter() - started) * 1000:.3f}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

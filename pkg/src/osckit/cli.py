"""Command-line entry point.

Exit codes: 0 success, 1 usage or malformed input, 2 no solution exists for
the given parameters, 3 verification failure.  Reports go to stdout as JSON
(or CSV/text where offered), diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

import numpy as np

from . import builder, frobenius, oscillation, probe
from .cnum import CNum, parse_rational, set_precision
from .config import CONFIG_ENV, ConfigError, load_config
from .solution import EqSpec, SolutionForm, SpecError
from .verify import StructureError, certify_pair, verify

EXIT_OK, EXIT_USAGE, EXIT_NO_SOLUTION, EXIT_VERIFY = 0, 1, 2, 3

log = logging.getLogger("osckit")


class UsageError(Exception):
    pass


class NoSolution(Exception):
    pass


class VerificationFailed(Exception):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _spec(args) -> EqSpec:
    try:
        return EqSpec(args.l, args.s, CNum(args.b2), CNum(args.b3))
    except SpecError as exc:
        raise UsageError(str(exc)) from exc


def _load_solutions(path: str) -> list[SolutionForm]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    items = data if isinstance(data, list) else [data]
    try:
        return [SolutionForm.from_json(obj) for obj in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} does not hold SolutionForm JSON: {exc!r}") from exc


def _solution_arg(args) -> SolutionForm:
    sols = _load_solutions(args.solution)
    if not (0 <= args.index < len(sols)):
        raise UsageError(f"--index {args.index} is out of range for {len(sols)} solution(s)")
    return sols[args.index]


# ---------------------------------------------------------------------------
# commands


def cmd_construct(args, cfg):
    spec_args = (args.l, args.s, CNum(args.b2), CNum(args.b3))
    try:
        sols = builder.construct(*spec_args)
    except builder.OddDegreeError as exc:
        raise NoSolution(str(exc)) from exc
    except SpecError as exc:
        raise UsageError(str(exc)) from exc
    except builder.BuilderError as exc:
        raise NoSolution(str(exc)) from exc
    if not sols:
        raise NoSolution(f"no zero-scarce solution for l={args.l}, s={args.s}, b2={args.b2}, b3={args.b3}")
    return [s.to_json() for s in sols]


def cmd_enumerate(args, cfg):
    if args.k_max < 0:
        raise UsageError("--k-max must be nonnegative")
    out = []
    for entry in builder.enumerate_case(args.case, args.k_max):
        item = {}
        for key, v in entry.items():
            if key == "solutions":
                item[key] = [s.to_json() for s in v]
            elif hasattr(v, "to_json"):
                item[key] = v.to_json()
            else:
                item[key] = v
        out.append(item)
    return out


def cmd_verify(args, cfg):
    sols = _load_solutions(args.solution)
    reports = []
    ok = True
    for sol in sols:
        rep = verify(sol, tol=cfg.residual_tol)
        ok = ok and rep.is_solution
        reports.append(rep.to_json())
    out = {"results": reports, "all_verified": ok}
    if len(sols) == 2 and sols[0].spec == sols[1].spec:
        try:
            pair = certify_pair(sols[0], sols[1], cfg.residual_tol)
            out["pair"] = {
                "independent": pair.is_solution,
                "wronskian": None if pair.wronskian_constant is None else pair.wronskian_constant.to_json(),
                "notes": pair.notes,
            }
        except StructureError as exc:
            out["pair"] = {"independent": False, "notes": [str(exc)]}
    if not ok:
        raise VerificationFailed("residual does not vanish", out)
    return out


def cmd_frobenius(args, cfg):
    spec = _spec(args)
    N = args.N if args.N is not None else cfg.N
    lm = frobenius.lommel_map(spec)
    try:
        fp = frobenius.frobenius_solve(lm.h, N)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return {"lommel": lm.to_json(), "pair": fp.to_json()}


def cmd_zeros(args, cfg):
    sol = _solution_arg(args)
    lat = oscillation.zeros_of(sol)
    radii = args.r or [5.0, 10.0, 20.0, 100.0]
    if any(r <= 0 for r in radii):
        raise UsageError("radii must be positive")
    table = oscillation.count_table(lat, radii)
    if cfg.format == "csv":
        return oscillation.counts_to_csv(table)
    out = {"lattice": lat.to_json(), "counts": [{"r": r, "n": n} for r, n in table]}
    if args.argument:
        out["argument_counts"] = [
            {"r": r, "n": oscillation.argument_count(sol, r, cfg.quad_nodes)} for r in radii
        ]
    sorted_r = sorted(set(radii))
    if len(sorted_r) >= 4:
        out["lambda_estimate"] = oscillation.lambda_estimate(lat, sorted_r)
    else:
        out["lambda_estimate"] = oscillation.lambda_estimate(lat, np.logspace(0, 4, 40))
    return out


def cmd_ray(args, cfg):
    sol = _solution_arg(args)
    if args.r_max <= 0:
        raise UsageError("--r-max must be positive")
    try:
        samples = oscillation.ray_from_solution(sol, args.theta, args.r_max, rtol=args.rtol,
                                                n_samples=args.samples, method=args.method)
    except oscillation.StiffnessError as exc:
        raise VerificationFailed(str(exc)) from exc
    if cfg.format == "csv":
        return samples.to_csv()
    out = samples.to_json()
    out["closed_form_relative_error"] = oscillation.relative_error(sol, samples)
    out["growth_ratio"] = oscillation.growth_ratio(samples)
    return out


def cmd_probe(args, cfg):
    if args.l % 2:
        raise NoSolution(builder.ODD_L_NOTE)
    try:
        results = probe.general_probe(args.l, args.s, args.k_max)
    except probe.ProbeError as exc:
        raise UsageError(str(exc)) from exc
    return [r.to_json() for r in results]


def cmd_alpha(args, cfg):
    try:
        m, ok = builder.alpha_admissible(args.value)
    except builder.BuilderError as exc:
        raise UsageError(str(exc)) from exc
    return {"m": m, "admissible": ok}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="osckit", description=__doc__.splitlines()[0])
    p.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    p.add_argument("--precision", type=int, help="working precision in bits")
    p.add_argument("--format", choices=("json", "csv", "text"), help="output format")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def eq_args(sp):
        sp.add_argument("--l", type=int, required=True)
        sp.add_argument("--s", type=int, required=True)
        sp.add_argument("--b2", type=_rational, required=True, help="p/q or decimal, read exactly")
        sp.add_argument("--b3", type=_rational, required=True, help="p/q or decimal, read exactly")

    sp = sub.add_parser("construct", help="closed-form zero-scarce solutions")
    eq_args(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("enumerate", help="closure systems and solutions up to k-max")
    sp.add_argument("--case", choices=("l2", "l4s1", "l4s3", "cor45"), required=True)
    sp.add_argument("--k-max", type=int, required=True)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("verify", help="residual check of a solution file")
    sp.add_argument("--solution", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("frobenius", help="Frobenius pair at the transformed singular point")
    eq_args(sp)
    sp.add_argument("--N", type=int, help="series truncation order")
    sp.set_defaults(func=cmd_frobenius)

    sp = sub.add_parser("zeros", help="zero lattice, n(r) and lambda estimate")
    sp.add_argument("--solution", required=True)
    sp.add_argument("--index", type=int, default=0, help="entry to use when the file holds a list")
    sp.add_argument("--r", type=float, nargs="+", help="radii")
    sp.add_argument("--argument", action="store_true", help="also count by the argument principle")
    sp.set_defaults(func=cmd_zeros)

    sp = sub.add_parser("ray", help="integrate the equation along a ray")
    sp.add_argument("--solution", required=True)
    sp.add_argument("--index", type=int, default=0)
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--r-max", type=float, required=True)
    sp.add_argument("--samples", type=int, default=101)
    sp.add_argument("--rtol", type=float, default=1e-10)
    sp.add_argument("--method", choices=("DOP853", "RK45", "taylor"), default="DOP853")
    sp.set_defaults(func=cmd_ray)

    sp = sub.add_parser("probe", help="closure systems for general even l")
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--k-max", type=int, required=True)
    sp.set_defaults(func=cmd_probe)

    sp = sub.add_parser("alpha", help="admissibility of alpha = s/l")
    sp.add_argument("--value", type=_rational, required=True)
    sp.set_defaults(func=cmd_alpha)
    return p


def _emit(result, fmt: str) -> None:
    if isinstance(result, str):
        sys.stdout.write(result)
        return
    if fmt == "text":
        sys.stdout.write(json.dumps(result, indent=2) + "\n")
    else:
        sys.stdout.write(json.dumps(result, separators=(",", ":")) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config).updated(precision_bits=args.precision, format=args.format)
        set_precision(cfg.precision_bits)
        result = args.func(args, cfg)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoSolution as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except VerificationFailed as exc:
        if exc.report is not None:
            _emit(exc.report, args.format or "json")
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    _emit(result, cfg.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

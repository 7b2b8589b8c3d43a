"""
Command line front end

Every subcommand prints a JSON report with the keys command, inputs,
result and diagnostics. Exit code is 0 on success, 2 when the request
is infeasible and 1 on any other error.
"""
import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

import pendulum

from spectral_range import __version__
from spectral_range.base import InfeasibleError, InputError, SpectralRangeError, get_settings
from spectral_range.camion_hoffman import decide, m_matrix_check
from spectral_range.cycles import critical_graph, cycle_means, perron_root
from spectral_range.eta import describe_eta, realize_perron_root
from spectral_range.formats import dump_report, load_matrix, load_nonneg, load_row_uniform
from spectral_range.matrix import aux, aux_complex, frobenius_form
from spectral_range.models import ComplexMatrix, Level, NonnegMatrix
from spectral_range.scaling import (
    aevdd_scalings,
    strict_antivisualizing_vector,
    strict_visualizing_vector,
    sum_visualize,
    sum_visualize_inverse,
)
from spectral_range.sigma import (
    gamma_regularity,
    realize_eigenvalue,
    sigma_describe,
    sigma_parameters,
    zero_in_sigma,
)
from spectral_range.simulation.oracle import CHECKS, run_check
from spectral_range.sunflower import (
    extremal_params,
    maximal_sunflower,
    minimal_sunflower,
    thin_sunflower,
)
from spectral_range.utils import zero_based

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def parse_complex(text: str) -> complex:
    """
    Parse re,im or a single real number
    """
    parts = [p.strip() for p in text.split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise InputError(f"cannot parse {text!r} as re,im")


def parse_cycle(text: str) -> List[int]:
    try:
        return zero_based(p for p in text.split(",") if p.strip())
    except ValueError as e:
        raise InputError(f"cannot parse cycle {text!r}: {e}")


def _nonneg(path: str) -> NonnegMatrix:
    matrix = load_matrix(path)
    if isinstance(matrix, ComplexMatrix):
        return matrix.modulus()
    return matrix


def cmd_aux(args: argparse.Namespace) -> Dict[str, Any]:
    matrix = load_matrix(args.matrix)
    if isinstance(matrix, ComplexMatrix):
        return aux_complex(matrix).to_json()
    return aux(matrix).to_json()


def cmd_fnf(args: argparse.Namespace) -> Dict[str, Any]:
    return frobenius_form(_nonneg(args.matrix)).to_json()


def cmd_means(args: argparse.Namespace) -> Dict[str, Any]:
    a = _nonneg(args.matrix)
    report = cycle_means(a)
    result: Dict[str, Any] = report.dict()
    result["rho"] = perron_root(a)
    if report.has_cycle:
        result["critical"] = critical_graph(a, Level.MAX).to_json()
        result["anticritical"] = critical_graph(a, Level.MIN).to_json()
    return result


def cmd_visualize(args: argparse.Namespace) -> Dict[str, Any]:
    a = load_nonneg(args.matrix)
    if args.aevdd:
        scalings = aevdd_scalings(a)
        return {
            "mu": scalings.mu,
            "nu": scalings.nu,
            "rho": scalings.rho,
            "case": scalings.case.value,
            "substochastic_scaling": scalings.substochastic_scaling.x.tolist(),
            "superstochastic_scaling": scalings.superstochastic_scaling.x.tolist(),
        }
    if args.anti:
        x = strict_antivisualizing_vector(a)
    else:
        x = strict_visualizing_vector(a)
    return {"x": x.x.tolist(), "scaled": x.apply(a.entries).tolist()}


def cmd_sum_visualize(args: argparse.Namespace) -> Dict[str, Any]:
    a = load_nonneg(args.matrix)
    if args.inverse:
        x = sum_visualize_inverse(a, args.level)
    else:
        x = sum_visualize(a, args.level)
    return {"level": args.level, "x": x.x.tolist(), "scaled": x.apply(a.entries).tolist()}


def cmd_sunflower(args: argparse.Namespace) -> Dict[str, Any]:
    b = load_row_uniform(args.matrix)
    if args.extremal == "min":
        sunflower = minimal_sunflower(b)
    elif args.extremal == "max":
        sunflower = maximal_sunflower(b)
    else:
        sunflower = thin_sunflower(b, [parse_cycle(c) for c in args.cycle or []])
    result = sunflower.to_json()
    result["mean"] = sunflower.mean()
    result["extremal"] = extremal_params(b).dict()
    return result


def cmd_eta(args: argparse.Namespace) -> Dict[str, Any]:
    b = load_row_uniform(args.matrix)
    if args.action == "describe":
        return describe_eta(b).to_json()
    if args.target is None:
        raise InputError("eta realize needs --target")
    return realize_perron_root(b, args.target).to_json()


def cmd_sigma(args: argparse.Namespace) -> Dict[str, Any]:
    b = load_row_uniform(args.matrix)
    if args.action == "describe":
        result = sigma_describe(b).to_json()
        result["m_tilde"] = sigma_parameters(b).m_tilde
        return result
    if args.action == "zero":
        return zero_in_sigma(b).to_json()
    if args.action == "gamma":
        return gamma_regularity(b).to_json()
    if args.lam is None:
        raise InputError("sigma realize needs --lambda")
    return realize_eigenvalue(b, parse_complex(args.lam)).to_json()


def cmd_camion_hoffman(args: argparse.Namespace) -> Dict[str, Any]:
    a = _nonneg(args.matrix)
    result = decide(a).to_json()
    if args.m_matrix:
        result["m_matrix"] = m_matrix_check(a)
    return result


def cmd_oracle(args: argparse.Namespace) -> Dict[str, Any]:
    failures = run_check(args.check, trials=args.trials, seed=args.seed)
    return {"check": args.check, "failures": failures, "passed": not failures}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-range",
        description="Perron roots and eigenvalues of matrices with "
        "prescribed graph and row sums",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help: str, matrix: str = "matrix file"):
        p = subparsers.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("matrix", help=matrix)
        return p

    add("aux", cmd_aux, "auxiliary row uniform matrix")
    add("fnf", cmd_fnf, "Frobenius normal form")
    add("means", cmd_means, "cycle means, critical graphs and Perron root")

    p = add("visualize", cmd_visualize, "strict (anti)visualization")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--strict", action="store_true", help="visualize (default)")
    group.add_argument("--anti", action="store_true", help="antivisualize")
    group.add_argument("--aevdd", action="store_true", help="both scalings of aux")

    p = add("sum-visualize", cmd_sum_visualize, "sum visualization at a level")
    p.add_argument("--level", type=float, required=True)
    p.add_argument("--inverse", action="store_true", help="inverse sum visualization")

    p = add("sunflower", cmd_sunflower, "sunflower subgraphs", "row uniform matrix file")
    p.add_argument(
        "--cycle", action="append", help="1-based cycle such as 1,2; once per final class"
    )
    p.add_argument("--extremal", choices=["min", "max"])

    p = subparsers.add_parser("eta", help="range of Perron roots")
    p.set_defaults(func=cmd_eta)
    p.add_argument("action", choices=["describe", "realize"])
    p.add_argument("matrix", help="row uniform matrix file")
    p.add_argument("--target", type=float)

    p = subparsers.add_parser("sigma", help="eigenvalue moduli")
    p.set_defaults(func=cmd_sigma)
    p.add_argument("action", choices=["describe", "zero", "realize", "gamma"])
    p.add_argument("matrix", help="row uniform matrix file")
    p.add_argument("--lambda", dest="lam", help="eigenvalue as re,im")

    p = add("camion-hoffman", cmd_camion_hoffman, "regularity of the modulus class")
    p.add_argument("--m-matrix", action="store_true", help="also run the M-matrix test")

    p = subparsers.add_parser("oracle", help="brute force cross checks")
    p.set_defaults(func=cmd_oracle)
    p.add_argument("check", choices=sorted(CHECKS))
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    return parser


def _inputs(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        k: v for k, v in vars(args).items() if k not in ("func", "verbose", "command")
    }


def _diagnostics() -> Dict[str, Any]:
    settings = get_settings()
    return {
        "version": __version__,
        "timestamp": pendulum.now(tz="UTC").to_iso8601_string(),
        "tolerances": settings.tolerances.dict(),
        "iterations": settings.iterations.dict(),
    }


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run the subcommand and print its report
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING
    logging.basicConfig(level=level)
    report: Dict[str, Any] = {"command": args.command, "inputs": _inputs(args)}
    code = EXIT_OK
    try:
        report["result"] = args.func(args)
        if args.command == "oracle" and not report["result"]["passed"]:
            code = EXIT_ERROR
    except InfeasibleError as e:
        logging.error(e)
        report["error"] = {"type": "infeasible", "clause": e.clause, "message": str(e)}
        code = EXIT_INFEASIBLE
    except (SpectralRangeError, ValueError, OSError) as e:
        logging.error(e)
        report["error"] = {"type": type(e).__name__, "message": str(e)}
        code = EXIT_ERROR
    report["diagnostics"] = _diagnostics()
    print(dump_report(report))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

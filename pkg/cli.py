#!/usr/bin/env python
"""
Command-line front end.

Usage:
    local-factors gamma --p 7 --n 3 [--oracle] [--json]
    local-factors slcm --config job.env
    local-factors plancherel --p 7 --n 6 --unit-exp 1 --m 2
    local-factors table --p 11 --n 5
    local-factors verify [--grid] [--only plancherel] [--jobs 4]

Exit codes: 0 success, 1 a verification failed, 2 the job was rejected.
"""

import argparse
import json
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from characters import CharacterError, GenuineCharData
from exact_scalars import ContextError
from factors import (FactorError, epsilon, l_factor, meta_gamma, meta_gamma_dual, partial_gamma_dual,
                     partial_meta_gamma_dual, shell_integral_gamma, tate_gamma, tate_gamma_dual)
from job_config import CONFIG_KEYS, ConfigError, JobConfig, load_config
from lagrangian import LagrangianDecomposition, dual_group
from logger_config import set_log_level, setup_logger
from plancherel import plancherel_harmonic_mean, plancherel_report, related_reps
from slcm import SlcmError, assemble_slcm, bareiss_determinant, characteristic_polynomial, matrix_trace
from tame_field import LocalContext, ResidueFieldError
from verification import DEFAULT_GRID, SuiteOptions, run_grid, select_suites

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_REJECTED = 2

REJECTED_ERRORS = (ConfigError, ContextError, ResidueFieldError, CharacterError, FactorError, SlcmError)


def cmd_gamma(config: JobConfig, oracle: bool = False) -> Dict[str, Any]:
    """L, epsilon, gamma in both slots, gamma~ and the partial factors at k."""
    ctx = config.build_context()
    data = config.build_data(ctx)
    decomposition = config.build_decomposition(ctx)
    chi, psi = data.chi, data.psi
    k = decomposition.kbar[config.k]
    payload: Dict[str, Any] = {
        "context": ctx.describe(),
        "character": chi.describe(),
        "psi": str(psi),
        "k": str(k),
        "L": l_factor(ctx, chi).encode(),
        "epsilon": epsilon(ctx, chi, psi).encode(),
        "gamma": tate_gamma(ctx, chi, psi).encode(),
        "gamma_dual": tate_gamma_dual(ctx, chi, psi).encode(),
        "meta_gamma": meta_gamma(ctx, chi, psi).encode(),
        "meta_gamma_dual": meta_gamma_dual(ctx, chi, psi).encode(),
        "partial_gamma_dual": partial_gamma_dual(ctx, decomposition, chi, psi, k).encode(),
    }
    if ctx.is_even:
        payload["partial_meta_gamma_dual"] = partial_meta_gamma_dual(ctx, decomposition, chi, psi, k).encode()
    if oracle:
        shell = shell_integral_gamma(ctx, chi, psi)
        difference = shell - tate_gamma_dual(ctx, chi, psi)
        payload["oracle"] = {"shell": shell.encode(), "difference": difference.encode(),
                             "agrees": difference.is_zero}
    return payload


def _slcm_payload(config: JobConfig, ctx: LocalContext, data: GenuineCharData,
                  decomposition: LagrangianDecomposition) -> Dict[str, Any]:
    matrix = assemble_slcm(decomposition, data)
    payload: Dict[str, Any] = {
        "context": ctx.describe(),
        "character": data.chi.describe(),
        "psi": str(data.psi),
        "decomposition": config.decomposition,
        "matrix": matrix.encode(),
        "trace": matrix_trace(matrix.entries).encode(),
        "det": bareiss_determinant(matrix.entries).encode(),
        "support": [[int(flag) for flag in row] for row in matrix.support()],
        "pretty": matrix.pretty(),
    }
    if ctx.d <= 5:
        payload["charpoly"] = [value.encode() for value in characteristic_polynomial(matrix.entries)]
    return payload


def cmd_slcm(config: JobConfig) -> Dict[str, Any]:
    """The Slcm with its trace, determinant and characteristic polynomial."""
    ctx = config.build_context()
    return _slcm_payload(config, ctx, config.build_data(ctx), config.build_decomposition(ctx))


def cmd_plancherel(config: JobConfig) -> Dict[str, Any]:
    """The Slcm payload plus every Plancherel path, c(sigma), the pole order and the reducibility verdict."""
    ctx = config.build_context()
    data = config.build_data(ctx)
    decomposition = config.build_decomposition(ctx)
    payload = _slcm_payload(config, ctx, data, decomposition)
    report = plancherel_report(data, decomposition)
    payload["plancherel"] = {
        "paths": {name: value.encode() for name, value in report.paths.items()},
        "mu_inverse": report.mu_inverse.encode(),
        "c_sigma": report.c_sigma.encode(),
        "pole_order_at_s0": report.pole_order_at_s0,
        "reducible": report.reducible,
        "paths_agree": report.paths_agree,
        "notes": report.notes,
    }
    if config.m is not None:
        members = related_reps(data, config.m)
        payload["plancherel"]["related"] = {
            "m": config.m,
            "members": [member.chi.describe() for member in members],
            "harmonic_mean": plancherel_harmonic_mean(data, config.m).encode(),
        }
    return payload


def cmd_table(config: JobConfig) -> Dict[str, Any]:
    """gamma(1 - s, chi^-1 eta, psi) (gamma~ on even covers) over the dual group, with conductors."""
    ctx = config.build_context()
    data = config.build_data(ctx)
    gamma = meta_gamma_dual if ctx.is_even else tate_gamma_dual
    rows = []
    for twist in dual_group(ctx):
        twisted = data.chi * twist
        rows.append({
            "eta": twist.describe(),
            "character": str(twisted),
            "conductor": twisted.conductor,
            "gamma_dual": gamma(ctx, twisted, data.psi).encode(),
        })
    return {"context": ctx.describe(), "psi": str(data.psi), "rows": rows}


def cmd_verify(config: Optional[JobConfig], grid: bool, only: Optional[Sequence[str]], jobs: int,
               seed: int) -> Dict[str, Any]:
    """
    Run the identity suites on the built-in grid and/or the configured context.

    Without a configured context the built-in grid always runs.
    """
    try:
        select_suites(only)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    points = DEFAULT_GRID if grid or config is None else ()
    extra = [config.build_context()] if config is not None else []
    report = run_grid(points, only=only, jobs=jobs, options=SuiteOptions(seed=seed), extra=extra)
    return {
        "passed": report.passed,
        "summary": report.summary(),
        "failures": [{"suite": item.suite, "name": item.name, "context": item.context, "detail": item.detail}
                     for item in report.failures],
    }


# -- output --------------------------------------------------------------------------------------------


def _render_text(command: str, payload: Dict[str, Any]) -> str:
    if command == "verify":
        lines = [f"{suite}: {counts['passed']} passed, {counts['failed']} failed"
                 for suite, counts in sorted(payload["summary"].items())]
        lines += [f"FAILED {item['suite']}.{item['name']} on {item['context']}: {item['detail']}"
                  for item in payload["failures"]]
        lines.append("all identities hold" if payload["passed"] else "verification failed")
        return "\n".join(lines)
    if command == "table":
        lines = [f"{row['character']}  e={row['conductor']}  {row['gamma_dual']}" for row in payload["rows"]]
        return "\n".join(lines)
    lines = []
    for key, value in sorted(payload.items()):
        if key == "pretty":
            continue
        if key == "matrix" and "pretty" in payload:
            lines.append(f"matrix:\n{payload['pretty']}")
        elif isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {inner}: {item}" for inner, item in sorted(value.items()))
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines)


def emit(command: str, payload: Dict[str, Any], as_json: bool) -> str:
    """Canonical text for a payload; JSON output is sorted and byte-stable."""
    if as_json:
        body = {key: value for key, value in payload.items() if key != "pretty"}
        return json.dumps(body, sort_keys=True, indent=2)
    return _render_text(command, payload)


# -- argument parsing ---------------------------------------------------------------------------------


def _job_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", type=str, help="Flat key=value job file")
    parent.add_argument("--json", action="store_true", help="Emit canonical JSON")
    parent.add_argument("--log-level", type=str, default=None, help="DEBUG, INFO, WARNING, ...")
    parent.add_argument("--p", type=int, help="Residue characteristic")
    parent.add_argument("--f", type=int, help="Residue degree")
    parent.add_argument("--n", type=int, help="Cover degree")
    parent.add_argument("--modulus", type=str, help="Comma separated coefficients of the F_q modulus")
    parent.add_argument("--depth", type=int, help="p-power depth of the scalar roots of unity")
    parent.add_argument("--unit-exp", dest="unit_exp", type=int, help="Exponent of chi on the generator")
    parent.add_argument("--varpi-num", dest="varpi_num", type=int, help="Numerator of the angle of chi(varpi)")
    parent.add_argument("--varpi-den", dest="varpi_den", type=int, help="Denominator of the angle of chi(varpi)")
    parent.add_argument("--psi-val", dest="psi_val", type=int, help="Valuation of a in psi_a")
    parent.add_argument("--psi-unit", dest="psi_unit", type=int, help="Discrete log of the unit part of a")
    parent.add_argument("--decomposition", choices=("standard", "swapped"), help="Lagrangian decomposition")
    parent.add_argument("--k", type=int, help="Index into K-bar for partial factors")
    parent.add_argument("--m", type=int, help="Cover degree of the related representations")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _job_flags()
    parser = argparse.ArgumentParser(prog="local-factors",
                                     description="Exact local factors and Plancherel measures for tame covers of SL2")
    commands = parser.add_subparsers(dest="command", required=True)

    gamma = commands.add_parser("gamma", parents=[parent], help="L, epsilon, gamma, gamma~ and partial factors")
    gamma.add_argument("--oracle", action="store_true", help="Compare with the shell integral (f = 1)")
    commands.add_parser("slcm", parents=[parent], help="Slcm with trace, determinant and charpoly")
    commands.add_parser("plancherel", parents=[parent], help="Plancherel measure by every path")
    commands.add_parser("table", parents=[parent], help="gamma over the dual group with conductors")

    verify = commands.add_parser("verify", parents=[parent], help="Run the identity suites")
    verify.add_argument("--grid", action="store_true", help="Run the built-in grid")
    verify.add_argument("--only", action="append", help="Restrict to a suite; repeatable")
    verify.add_argument("--jobs", type=int, default=1, help="Worker processes for the grid")
    verify.add_argument("--seed", type=int, default=0, help="Seed for the random Schwartz functions")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: getattr(args, key, None) for key in CONFIG_KEYS}


def _wants_job(args: argparse.Namespace) -> bool:
    return args.config is not None or args.p is not None


COMMANDS: Dict[str, Callable[[JobConfig], Dict[str, Any]]] = {
    "slcm": cmd_slcm,
    "plancherel": cmd_plancherel,
    "table": cmd_table,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and print its output."""
    args = build_parser().parse_args(argv)
    if args.log_level:
        try:
            set_log_level(args.log_level)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_REJECTED

    logger.info(f"Starting {args.command}")
    try:
        if args.command == "verify":
            config = load_config(args.config, _overrides(args)) if _wants_job(args) else None
            payload = cmd_verify(config, args.grid, args.only, args.jobs, args.seed)
        else:
            config = load_config(args.config, _overrides(args))
            if args.command == "gamma":
                payload = cmd_gamma(config, args.oracle)
            else:
                payload = COMMANDS[args.command](config)
    except REJECTED_ERRORS as exc:
        logger.error(f"{args.command} rejected: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED

    print(emit(args.command, payload, args.json))
    if args.command == "verify" and not payload["passed"]:
        logger.warning(f"verification failed with {len(payload['failures'])} failing identities")
        return EXIT_FAILED
    logger.info(f"Finished {args.command}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

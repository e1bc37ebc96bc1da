"""Batch front end: load problems, run computations, emit JSON/CSV reports.

Subcommands: ``decompose``, ``analyze``, ``optimize``, ``classify``,
``qubit-max``, ``bell-scan``, ``verify``.  Exit codes: 0 on success, 2 on a
validation error (malformed input, missing field, unphysical data), 3 when a
numerical invariant fails.  Every failure message names the violated
invariant and, where one applies, the offending tolerance.

Identical configuration and seed produce byte-identical reports; any command
that samples requires an explicit ``--seed``.  The SEC_TRANSFER_THREADS
environment variable caps worker threads inside the sampling loops.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import formats, verify
from .classify import classify_flow, passive_max_active_product, thermal_product
from .errors import NumericalInvariantError, ValidationError
from .optimize import (
    METHOD_DIAGONAL,
    OptimizationResult,
    maximize_transfer_exact,
    monte_carlo_max,
    optimal_diagonal_unitary,
)
from .qubits import max_transfer_2q, plane_scan
from .states import decompose
from .transfer import analyze, transfer_direct
from .unitaries import sample_haar

TOLERANCE_KEYS = ("herm", "trace", "psd", "split")

DEFAULT_TOLERANCES = {
    "herm": 1e-12,
    "trace": 1e-12,
    "psd": 1e-10,
    "split": 1e-12,
}


@dataclass
class RunConfig:
    """Validated invocation of one subcommand."""

    command: str
    input_path: str | None = None
    unitary_path: str | None = None
    output_path: str | None = None
    csv_path: str | None = None
    target: str | None = None
    seed: int | None = None
    samples: int | None = None
    resolution: int = 201
    method: str = "exact"
    beta_a: float | None = None
    beta_b: float | None = None
    probs_a: list[float] | None = None
    probs_b: list[float] | None = None
    fixed_alpha: bool = False
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))


def _parse_tolerances(pairs: list[str] | None) -> dict[str, float]:
    tolerances = dict(DEFAULT_TOLERANCES)
    for pair in pairs or []:
        if "=" not in pair:
            raise ValidationError(f"--tolerance expects KEY=VAL, got {pair!r}")
        key, _, raw = pair.partition("=")
        if key not in TOLERANCE_KEYS:
            raise ValidationError(
                f"unknown tolerance key {key!r}; valid keys: {', '.join(TOLERANCE_KEYS)}"
            )
        try:
            tolerances[key] = float(raw)
        except ValueError:
            raise ValidationError(f"tolerance {key!r} needs a float, got {raw!r}") from None
    return tolerances


def _parse_probs(raw: str | None) -> list[float] | None:
    if raw is None:
        return None
    try:
        return [float(x) for x in raw.split(",")]
    except ValueError:
        raise ValidationError(f"expected comma-separated floats, got {raw!r}") from None


def _load_state(config: RunConfig, require_state: bool = True):
    if config.input_path is None:
        raise ValidationError(f"command {config.command!r} requires --input")
    h_a, h_b, spec, state = formats.load_problem(config.input_path, config.tolerances)
    if require_state and state is None:
        raise ValidationError("problem file carries no state")
    return h_a, h_b, spec, state


def _write_report(config: RunConfig, payload: dict) -> None:
    if config.output_path is None:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        formats.dump_json(payload, config.output_path)


def run(config: RunConfig) -> int:
    """Execute one validated configuration; returns the process exit code."""
    if config.command == "decompose":
        _, _, spec, state = _load_state(config)
        decomp = decompose(state, spec)
        decomp.validate(trace_tol=config.tolerances["trace"])
        payload = {
            "p_E": {formats.fraction_key(e): p for e, p in sorted(decomp.p_E.items())},
            "blocks": {
                formats.fraction_key(e): [float(x) for x in b.probs]
                for e, b in sorted(decomp.diag_blocks.items())
            },
            "coherence_blocks": sorted(
                f"{formats.fraction_key(e1)}|{formats.fraction_key(e2)}"
                for e1, e2 in decomp.coh_blocks
            ),
        }
        _write_report(config, payload)
        if config.csv_path is not None:
            formats.write_decomposition_csv(decomp, config.csv_path)
        return 0

    if config.command == "analyze":
        _, _, spec, state = _load_state(config)
        if config.unitary_path is not None:
            with open(config.unitary_path, "r", encoding="utf-8") as handle:
                u = formats.sec_unitary_from_json(json.load(handle), spec)
        elif config.seed is not None:
            u = sample_haar(spec, config.seed)
        else:
            raise ValidationError("analyze needs --unitary FILE or --seed N")
        report = analyze(state, u, config.target, split_tol=config.tolerances["split"])
        _write_report(config, formats.transfer_report_to_json(report))
        return 0

    if config.command == "optimize":
        _, _, spec, state = _load_state(config)
        if config.method == "exact":
            result = maximize_transfer_exact(state, spec, config.target)
        elif config.method == "diagonal":
            decomp = decompose(state, spec)
            unitary = optimal_diagonal_unitary(decomp, spec, config.target)
            value = transfer_direct(state, unitary, config.target)
            result = OptimizationResult(value, unitary, METHOD_DIAGONAL)
        elif config.method == "monte-carlo":
            if config.seed is None:
                raise ValidationError("optimize --method monte-carlo requires --seed")
            samples = config.samples or 10000
            result = monte_carlo_max(state, spec, config.target, samples, config.seed)
        else:
            raise ValidationError(f"unknown optimize method {config.method!r}")
        _write_report(config, formats.optimization_result_to_json(result))
        return 0

    if config.command == "classify":
        h_a, h_b, spec, state = _load_state(config, require_state=False)
        constructors = [
            config.beta_a is not None or config.beta_b is not None,
            config.probs_a is not None or config.probs_b is not None,
        ]
        if sum(constructors) > 1:
            raise ValidationError("choose one of thermal or passive/max-active flags")
        if constructors[0]:
            if config.beta_a is None or config.beta_b is None:
                raise ValidationError("thermal constructor needs both --beta-a and --beta-b")
            state = thermal_product(h_a, h_b, config.beta_a, config.beta_b)
        elif constructors[1]:
            if config.probs_a is None or config.probs_b is None:
                raise ValidationError(
                    "passive/max-active constructor needs both --probs-a and --probs-b"
                )
            state = passive_max_active_product(config.probs_a, config.probs_b, h_a, h_b)
        elif state is None:
            raise ValidationError(
                "classify needs a state in the problem file or constructor flags"
            )
        label = classify_flow(state, spec, config.target)
        _write_report(config, formats.flow_classification_to_json(label))
        return 0

    if config.command == "qubit-max":
        if config.input_path is None:
            raise ValidationError("qubit-max requires --input with two-qubit parameters")
        with open(config.input_path, "r", encoding="utf-8") as handle:
            params = formats.two_qubit_params_from_json(json.load(handle))
        optimum = max_transfer_2q(
            params, config.target, optimize_alpha=not config.fixed_alpha
        )
        payload = {
            "target": config.target,
            "value": optimum.value,
            "r_star": optimum.r_star,
            "phi_star": optimum.phi_star,
            "alpha_star_re": optimum.alpha_star.real,
            "alpha_star_im": optimum.alpha_star.imag,
            "alpha_optimized": not config.fixed_alpha,
        }
        _write_report(config, payload)
        return 0

    if config.command == "bell-scan":
        if config.output_path is None:
            raise ValidationError("bell-scan requires --output for the CSV table")
        scan = plane_scan(config.resolution)
        formats.write_plane_scan_csv(scan, config.output_path)
        return 0

    if config.command == "verify":
        seed = config.seed if config.seed is not None else 20240801
        results = verify.run_all(seed)
        print(verify.format_table(results))
        if config.output_path is not None:
            formats.dump_json(
                {
                    "seed": seed,
                    "checks": [
                        {"name": r.name, "passed": r.passed, "detail": r.detail}
                        for r in results
                    ],
                },
                config.output_path,
            )
        if not all(r.passed for r in results):
            return 3
        return 0

    raise ValidationError(f"unknown command {config.command!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sec-transfer",
        description=(
            "Energy transfer between two finite quantum systems under "
            "energy-conserving block unitaries."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(cmd, target=False, seed=False):
        cmd.add_argument("--input", type=str, default=None, help="problem JSON file")
        cmd.add_argument("--output", type=str, default=None, help="report path (default stdout)")
        cmd.add_argument(
            "--tolerance",
            action="append",
            metavar="KEY=VAL",
            help=f"override a tolerance ({', '.join(TOLERANCE_KEYS)})",
        )
        if target:
            cmd.add_argument("--target", choices=("A", "B"), required=True)
        if seed:
            cmd.add_argument("--seed", type=int, default=None)

    decompose_cmd = sub.add_parser("decompose", help="split a state into energy blocks")
    common(decompose_cmd)
    decompose_cmd.add_argument("--csv", type=str, default=None, help="also write a CSV summary")

    analyze_cmd = sub.add_parser("analyze", help="transfer report for one unitary")
    common(analyze_cmd, target=True, seed=True)
    analyze_cmd.add_argument("--unitary", type=str, default=None, help="block-unitary JSON file")

    optimize_cmd = sub.add_parser("optimize", help="maximize the transfer to one side")
    common(optimize_cmd, target=True, seed=True)
    optimize_cmd.add_argument(
        "--method", choices=("exact", "diagonal", "monte-carlo"), default="exact"
    )
    optimize_cmd.add_argument("--samples", type=int, default=None)

    classify_cmd = sub.add_parser("classify", help="one-way energy-flow membership")
    common(classify_cmd, target=True)
    classify_cmd.add_argument("--beta-a", type=float, default=None)
    classify_cmd.add_argument("--beta-b", type=float, default=None)
    classify_cmd.add_argument("--probs-a", type=str, default=None, help="comma-separated")
    classify_cmd.add_argument("--probs-b", type=str, default=None, help="comma-separated")

    qubit_cmd = sub.add_parser("qubit-max", help="two-qubit closed-form optimum")
    common(qubit_cmd, target=True)
    qubit_cmd.add_argument(
        "--fixed-alpha",
        action="store_true",
        help="optimize the unitary only, keeping the state's own coherence",
    )

    scan_cmd = sub.add_parser("bell-scan", help="CSV scan of the Bell-diagonal plane")
    common(scan_cmd)
    scan_cmd.add_argument("--resolution", type=int, default=201)

    verify_cmd = sub.add_parser("verify", help="run the built-in property suite")
    common(verify_cmd, seed=True)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=getattr(args, "input", None),
        unitary_path=getattr(args, "unitary", None),
        output_path=getattr(args, "output", None),
        csv_path=getattr(args, "csv", None),
        target=getattr(args, "target", None),
        seed=getattr(args, "seed", None),
        samples=getattr(args, "samples", None),
        resolution=getattr(args, "resolution", 201),
        method=getattr(args, "method", "exact"),
        beta_a=getattr(args, "beta_a", None),
        beta_b=getattr(args, "beta_b", None),
        probs_a=_parse_probs(getattr(args, "probs_a", None)),
        probs_b=_parse_probs(getattr(args, "probs_b", None)),
        fixed_alpha=getattr(args, "fixed_alpha", False),
        tolerances=_parse_tolerances(getattr(args, "tolerance", None)),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        return run(config)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except NumericalInvariantError as exc:
        print(f"numerical invariant violated: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"validation error: cannot read {exc.filename!r}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"validation error: malformed JSON ({exc})", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

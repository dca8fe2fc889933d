"""Command-line front end for the experiments.

Each subcommand reproduces one of the study's runs and writes a CSV plus a
manifest echo into --out; errors exit nonzero with a JSON payload on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .chain import ChainSpec, analyze_transfer, pst_couplings
from .code import parity_condition
from .harness import (
    exp_coupling,
    exp_dephasing,
    exp_single_z,
    exp_timing,
    make_code,
)


def _chain_from_args(args) -> ChainSpec:
    if getattr(args, "config", None):
        with open(args.config) as fh:
            text = fh.read()
        stripped = text.lstrip()
        if stripped.startswith("{"):
            return ChainSpec.from_json(text)
        return ChainSpec.from_config(text)
    return pst_couplings(args.pst, scale=args.scale)


def _add_chain_args(p: argparse.ArgumentParser, default_n: int = 15) -> None:
    p.add_argument("--config", help="chain config file (key=value or JSON)")
    p.add_argument("--pst", type=int, default=default_n,
                   help="build the standard perfect-transfer chain of this length")
    p.add_argument("--scale", type=float, default=1.0, help="coupling scale factor")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output directory (CSV + manifest)")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="stdout summary format")
    p.add_argument("--prune", type=float, default=0.0,
                   help="branch probability floor (0 = exact tracking)")


def _grid(text: str) -> tuple[float, ...]:
    """Parse "a,b,c" or "start:stop:count" into a float grid."""
    if ":" in text:
        start, stop, count = text.split(":")
        return tuple(np.linspace(float(start), float(stop), int(count)))
    return tuple(float(tok) for tok in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chainqec", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transfer-check", help="analyse a chain for perfect transfer")
    _add_chain_args(p)
    p.add_argument("--tolerance", type=float, default=1e-10)

    p = sub.add_parser("single-z", help="random single phase flips on the revival setup")
    _add_chain_args(p)
    _add_common(p)
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("--code", default="minimal15")

    p = sub.add_parser("timing-sweep", help="readout-offset sweep")
    _add_chain_args(p)
    _add_common(p)
    p.add_argument("--grid", type=_grid, default=None,
                   help='offsets as "a,b,c" or "start:stop:count" (default 0..0.1 t0, 21 points)')
    p.add_argument("--code", default="minimal15")

    p = sub.add_parser("coupling-sweep", help="coupling-disorder sweep")
    _add_chain_args(p)
    _add_common(p)
    p.add_argument("--grid", type=_grid, default=None,
                   help='disorder fractions (default 0..0.1, 11 points)')
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--code", default="minimal15")

    p = sub.add_parser("dephasing", help="master-equation mode-decay check")
    _add_chain_args(p, default_n=5)
    _add_common(p)
    p.add_argument("--gammas", type=_grid, default=(0.01, 0.1))

    p = sub.add_parser("code-info", help="print a code's tableau and properties")
    p.add_argument("--code", default="minimal15", help='"minimal15" or "shor:<d>"')
    return ap


def _emit(args, payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for k, v in payload.items():
            print(f"{k}: {v}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "transfer-check":
            spec = _chain_from_args(args)
            rep = analyze_transfer(spec, tolerance=args.tolerance)
            print(json.dumps({
                "n_sites": spec.n_sites,
                "transfer_time": rep.transfer_time,
                "mirror_fidelity": rep.mirror_fidelity,
                "global_phase": [rep.global_phase.real, rep.global_phase.imag],
                "spectral_bound": rep.spectral_bound,
                "is_perfect": rep.is_perfect,
            }, sort_keys=True))
        elif args.command == "single-z":
            summary = exp_single_z(
                samples=args.samples, seed=args.seed, spec=_chain_from_args(args),
                code_id=args.code, out_dir=args.out, prune_below=args.prune,
            )
            _emit(args, {
                "samples": args.samples,
                "min_success": summary.min_success,
                "mean_success": summary.mean_success,
            })
        elif args.command == "timing-sweep":
            curve = exp_timing(
                delta_grid=args.grid, seed=args.seed, spec=_chain_from_args(args),
                code_id=args.code, out_dir=args.out, prune_below=args.prune,
            )
            _emit(args, {
                "points": len(curve.deltas),
                "min_success": min(curve.successes),
                "success_at_zero": curve.successes[0],
            })
        elif args.command == "coupling-sweep":
            curves = exp_coupling(
                f_grid=args.grid, instances=args.instances, seed=args.seed,
                spec=_chain_from_args(args), code_id=args.code, out_dir=args.out,
                prune_below=args.prune,
            )
            _emit(args, {
                "points": len(curves.fractions),
                "mean_success_last": curves.mean_success[-1],
                "min_success_last": curves.min_success[-1],
            })
        elif args.command == "dephasing":
            spec = _chain_from_args(args)
            report = exp_dephasing(
                n_sites=spec.n_sites, gamma_grid=args.gammas, spec=spec, out_dir=args.out,
            )
            _emit(args, {
                "gammas": ",".join(str(g) for g in report.gammas),
                "max_deviation": max(report.max_deviation),
            })
        elif args.command == "code-info":
            code = make_code(args.code)
            code.validate()
            print(code.to_tableau(), end="")
            print(f"# parity_condition {parity_condition(code)}")
            print(f"# logical_qubits {code.n_logical}")
        return 0
    except Exception as exc:  # noqa: BLE001 - single reporting point for the CLI
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

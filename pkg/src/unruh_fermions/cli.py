"""Command-line entry point: ``unruh-fermions sweep|verify``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .fock import ORDERINGS
from .scenarios import DetectorConfig, NON_DISTINGUISHING
from .states import Family
from .sweep import (
    PRESETS,
    SweepConfig,
    SweepConfigError,
    load_config_file,
    parse_list,
    preset,
    run_sweep,
)
from .verify import run_verify


def _sweep_config(args) -> SweepConfig:
    if args.preset and args.file:
        raise SweepConfigError("preset", "use either --preset or --file, not both")
    if args.preset:
        cfg = preset(args.preset)
    elif args.file:
        cfg = load_config_file(args.file)
    else:
        if not args.family:
            raise SweepConfigError("family", "required without --preset or --file")
        cfg = SweepConfig(Family.parse(args.family), NON_DISTINGUISHING)

    updates: dict = {}
    try:
        if args.family and (args.preset or args.file):
            updates["family"] = Family.parse(args.family)
    except ValueError as exc:
        raise SweepConfigError("family", str(exc)) from None
    for flag, attr in (("alpha", "alphas"), ("qr", "q_Rs"), ("fidelity", "fidelities")):
        value = getattr(args, flag)
        if value is not None:
            try:
                updates[attr] = tuple(parse_list(value))
            except ValueError as exc:
                raise SweepConfigError(flag, str(exc)) from None
    if args.config is not None:
        try:
            updates["configs"] = tuple(DetectorConfig.parse(t) for t in args.config.split(",") if t.strip())
        except ValueError as exc:
            raise SweepConfigError("config", str(exc)) from None
    if args.gamma_steps is not None:
        updates["gamma_steps"] = args.gamma_steps
    if args.out is not None:
        updates["out"] = Path(args.out)
    elif cfg.out is None and args.preset:
        updates["out"] = Path(f"{args.preset}.csv")
    cfg = replace(cfg, **updates)
    cfg.validate()
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unruh-fermions",
        description="Negativity of fermionic Unruh-mode states beyond the single-mode approximation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="sweep the Unruh angle and write negativity curves as CSV")
    sw.add_argument("--preset", choices=sorted(PRESETS), help="built-in sweep (fig2 ... fig8)")
    sw.add_argument("--file", help="INI file with a [sweep] section")
    sw.add_argument("--family", help="phi+, phi-, phi* or werner")
    sw.add_argument("--config", help="comma-separated detector configs, e.g. bob-I,antibob-II")
    sw.add_argument("--alpha", help="comma-separated angles, e.g. pi/4,pi/18")
    sw.add_argument("--qr", help="comma-separated q_R values")
    sw.add_argument("--fidelity", help="comma-separated Werner fidelities")
    sw.add_argument("--gamma-steps", type=int, help="points on [0, pi/4] (default 181)")
    sw.add_argument("--out", help="output CSV path")
    sw.add_argument("--workers", type=int, help="worker threads (default $UNRUH_WORKERS or 1)")

    ve = sub.add_parser("verify", help="run the invariant and reproduction checks")
    ve.add_argument("--report", help="write the report (plus .json and oracle files) here")
    ve.add_argument("--ordering", choices=sorted(ORDERINGS), default="canonical")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "sweep":
        try:
            cfg = _sweep_config(args)
            path = run_sweep(cfg, workers=args.workers)
        except SweepConfigError as exc:
            print(f"error: invalid sweep config: {exc}", file=sys.stderr)
            return 2
        except OSError as exc:
            print(f"error: cannot write output: {exc}", file=sys.stderr)
            return 2
        print(f"wrote {path}")
        return 0

    try:
        code, _ = run_verify(ORDERINGS[args.ordering], args.report)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

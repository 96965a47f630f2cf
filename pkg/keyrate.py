"""
keyrate.py: command-line entrypoint for SNS-PM-QKD key-rate numerics.

Subcommands:
1. ``rate``          one RatePoint at the configured distance.
2. ``sweep``         rate-distance curve written as CSV.
3. ``max-distance``  bisection for the largest distance with a positive rate.
4. ``attack``        double-POVM detectability per distance, as CSV.
5. ``mc-validate``   loss-only Monte Carlo against the analytic probabilities.
6. ``reproduce``     named preset (or preset group) with its band check.
7. ``optimize``      sending probability that maximises the rate at fixed L.

Parameters come from ``--preset``, then ``--config`` (JSON or YAML), then
``--override key=value`` pairs, validated once merged.

Exit codes: 0 ok, 1 check failed, 2 invalid parameter, 3 numerical
degeneracy.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.analysis.attack import ATTACK_BASELINES, ATTACK_REGIMES, detectability
from src.analysis.presets import PRESET_GROUPS, PRESETS, Preset, get_preset, resolve_presets, with_variant
from src.analysis.rates import ROW_COLUMNS, VARIANTS, RatePoint, rate
from src.analysis.reproduction_gate import ReproductionGate
from src.analysis.sweep import ATTACK_VARIANTS, SWEEP_VARIANTS, Grid, SweepSpec, max_distance, optimize_epsilon, sweep
from src.protocol.errors import NumericalDegeneracyError, ParameterDomainError
from src.protocol.params import ProtocolParams, params_summary
from src.simulation.mc_oracle import (
    Z_LIMIT,
    all_within,
    analytic_expectations,
    empirical_vs_analytic,
    simulate,
)
from src.utils.config import build_params
from src.utils.output import write_csv, write_json

logger = logging.getLogger("keyrate")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_DOMAIN = 2
EXIT_DEGENERATE = 3

ATTACK_COLUMNS = ("L_km", "e_distinguish", "e_signal", "ratio", "regime", "detectable")


def _setup_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
    )


def _params_from_args(args: argparse.Namespace) -> ProtocolParams:
    base = get_preset(args.preset).params if getattr(args, "preset", None) else None
    return build_params(args.config, args.override, base=base)


def _format_point(point: RatePoint) -> str:
    lines = [
        f"\nRate at L={point.L:g} km ({point.variant}):",
        f"  R            = {point.R:.6e} bits/round",
        f"  e_signal     = {point.e_signal:.6e}",
        f"  e_key        = {point.e_key:.6e}",
        f"  chi          = {point.chi:.6f}",
        f"  p_conclusive = {point.p_conclusive:.6e}",
        f"  P_sns / P_ss / P_nn = {point.P_sns:.6e} / {point.P_ss:.6e} / {point.P_nn:.6e}",
        f"  epsilon      = {point.epsilon:.6f}",
    ]
    if point.flags:
        lines.append(f"  flags        = {', '.join(point.flags)}")
    return "\n".join(lines)


# -- subcommands --------------------------------------------------------------

def cmd_rate(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    point = rate(params, args.variant, epsilon=args.epsilon)
    print(_format_point(point))
    if args.output:
        write_csv([point.to_row()], Path(args.output), ROW_COLUMNS)
    return EXIT_OK


def _grid_from_args(args: argparse.Namespace, preset: Optional[Preset]) -> Grid:
    if args.start is None and args.stop is None and preset is not None:
        return preset.grid
    start = args.start if args.start is not None else 0.0
    stop = args.stop if args.stop is not None else 1000.0
    try:
        return Grid(start, stop, args.step)
    except ValueError as exc:
        raise ParameterDomainError(f"grid: {exc}", "grid") from exc


def cmd_sweep(args: argparse.Namespace) -> int:
    preset = get_preset(args.preset) if args.preset else None
    params = _params_from_args(args)
    variant = args.variant or (preset.variant if preset else "real")
    spec = SweepSpec(params=params, variant=variant, grid=_grid_from_args(args, preset),
                     preset=args.preset, baseline=preset.baseline if preset else "real")
    records = sweep(spec, workers=args.workers)
    columns = ATTACK_COLUMNS if spec.is_attack else ROW_COLUMNS
    path = write_csv([r.to_row() for r in records], Path(args.output), columns)
    print(f"{len(records)} points written to {path}")
    return EXIT_OK


def cmd_max_distance(args: argparse.Namespace) -> int:
    preset = get_preset(args.preset) if args.preset else None
    params = _params_from_args(args)
    variant = args.variant or (preset.variant if preset else "real")
    bracket = tuple(args.bracket) if args.bracket else (preset.bracket if preset else (0.0, 2000.0))
    L_star = max_distance(params, variant, bracket, args.tol)
    print(f"max_distance_km={L_star:.1f} variant={variant}")
    return EXIT_OK


def cmd_attack(args: argparse.Namespace) -> int:
    preset = get_preset(args.preset) if args.preset else None
    params = _params_from_args(args)
    grid = _grid_from_args(args, preset)
    attack_preset = preset if preset is not None and preset.is_attack else None
    regime = args.regime or (ATTACK_VARIANTS[attack_preset.variant] if attack_preset else "realistic")
    baseline = args.variant or (attack_preset.baseline if attack_preset else "real")
    reports = detectability(params, grid.points(), regime=regime, variant=baseline)
    path = write_csv([r.to_row() for r in reports], Path(args.output), ATTACK_COLUMNS)
    hidden = [r.L for r in reports if not r.detectable]
    print(f"{len(reports)} points written to {path}")
    label = regime if regime == "loss" else f"{regime}, baseline {baseline}"
    print(f"detectable at {len(reports) - len(hidden)}/{len(reports)} points ({label})")
    return EXIT_OK if not hidden else EXIT_CHECK_FAILED


def cmd_mc_validate(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    eps = params.epsilon
    summary = simulate(
        params.mu, eps, params.eta, args.N, args.seed,
        shards=args.shards, workers=args.workers, trace_limit=args.trace_limit,
    )
    scores = empirical_vs_analytic(summary, analytic_expectations(params.mu, eps, params.eta))

    print(f"\nMonte Carlo ({summary.rng}, seed {summary.seed}, {summary.N} rounds, {summary.shards} shards):")
    for s in scores:
        if s.skipped:
            print(f"  {s.statistic:<14} observed={s.observed:.6f} expected={s.expected:.6f}  {s.note}")
        else:
            print(f"  {s.statistic:<14} observed={s.observed:.6f} expected={s.expected:.6f}  z={s.z:+.2f}")
    print(f"  kept-key correlation: {summary.correlation:.6f}")

    if args.output:
        write_csv([summary.to_row()], Path(args.output))
    if args.trace:
        write_csv([r.to_row() for r in summary.trace], Path(args.trace))

    correlated = summary.conclusive == 0 or summary.correlation == 1.0
    ok = all_within(scores, Z_LIMIT) and correlated
    print(f"  all |z| < {Z_LIMIT:g}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _reproduce_attack(preset: Preset, out_dir: Path) -> bool:
    records = sweep(preset.spec())
    write_csv([r.to_row() for r in records], out_dir / f"{preset.name}.csv", ATTACK_COLUMNS)
    hidden = [r.L for r in records if not r.detectable]
    print(f"\n{preset.name}: detectable at {len(records) - len(hidden)}/{len(records)} points")
    return not hidden


def cmd_reproduce(args: argparse.Namespace) -> int:
    out_dir = Path(args.output_dir)
    gate = ReproductionGate(workers=args.workers)
    all_passed = True
    for preset in resolve_presets(args.preset):
        if args.variant:
            preset = with_variant(preset, args.variant)
        if preset.is_attack:
            all_passed &= _reproduce_attack(preset, out_dir)
            continue
        result = gate.evaluate(preset, with_curve=not args.no_curve)
        stem = preset.name.replace(":", "_")
        if result.points:
            write_csv([p.to_row() for p in result.points], out_dir / f"{stem}.csv", ROW_COLUMNS)
        if args.json:
            gate.save(result, out_dir / f"{stem}.json")
        print(gate.report(result))
        all_passed &= result.passes()
    return EXIT_OK if all_passed else EXIT_CHECK_FAILED


def cmd_optimize(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    if args.L is not None:
        params = params.with_updates(L=args.L)
    optimum = optimize_epsilon(params, args.variant)
    print(
        f"\nOptimal epsilon at L={optimum.L:g} km ({args.variant}):\n"
        f"  epsilon* = {optimum.epsilon:.6f}  rate = {optimum.rate:.6e}\n"
        f"  profile  = {optimum.profile_epsilon:.6f}  rate = {optimum.profile_rate:.6e}"
    )
    if args.output:
        write_json({"params": params_summary(params), **optimum.to_dict()}, Path(args.output))
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def _add_param_source(sub: argparse.ArgumentParser, preset: bool = True) -> None:
    sub.add_argument("--config", default=None, help="JSON or YAML parameter file")
    sub.add_argument(
        "--override", action="append", default=[], metavar="KEY=VALUE",
        help="Parameter override, applied after the config (repeatable)",
    )
    if preset:
        sub.add_argument("--preset", default=None, choices=sorted(PRESETS), help="Start from a named preset")


def _add_grid(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--start", type=float, default=None, help="First distance in km")
    sub.add_argument("--stop", type=float, default=None, help="Last distance in km")
    sub.add_argument("--step", type=float, default=1.0, help="Grid step in km")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="SNS-PM-QKD key rates, attacks and reproductions")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("rate", help="Evaluate one rate point")
    _add_param_source(p)
    p.add_argument("--variant", default="real", choices=VARIANTS)
    p.add_argument("--epsilon", type=float, default=None, help="Fixed sending probability")
    p.add_argument("--output", default=None, help="Optional CSV path")
    p.set_defaults(func=cmd_rate)

    p = subs.add_parser("sweep", help="Rate-distance curve")
    _add_param_source(p)
    _add_grid(p)
    p.add_argument("--variant", default=None, choices=SWEEP_VARIANTS)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", default="results/sweep.csv")
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("max-distance", help="Largest distance with a positive rate")
    _add_param_source(p)
    p.add_argument("--variant", default=None, choices=VARIANTS)
    p.add_argument("--bracket", type=float, nargs=2, default=None, metavar=("LO", "HI"))
    p.add_argument("--tol", type=float, default=0.5, help="Bisection tolerance in km")
    p.set_defaults(func=cmd_max_distance)

    p = subs.add_parser("attack", help="Double-POVM detectability sweep")
    _add_param_source(p)
    _add_grid(p)
    p.add_argument("--regime", default=None, choices=ATTACK_REGIMES,
                   help="Default: the preset's regime, else realistic")
    p.add_argument("--variant", default=None, choices=ATTACK_BASELINES,
                   help="Protocol whose signal error is the baseline (default: preset's, else real)")
    p.add_argument("--output", default="results/attack.csv")
    p.set_defaults(func=cmd_attack)

    p = subs.add_parser("mc-validate", help="Monte Carlo check of loss-only probabilities")
    _add_param_source(p, preset=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--N", type=int, default=1_000_000)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--trace", default=None, help="Optional per-round trace CSV")
    p.add_argument("--trace-limit", type=int, default=1000)
    p.add_argument("--output", default=None, help="Optional summary CSV")
    p.set_defaults(func=cmd_mc_validate)

    p = subs.add_parser("reproduce", help="Reproduce a named preset or preset group")
    p.add_argument("preset", choices=sorted(PRESETS) + sorted(PRESET_GROUPS))
    p.add_argument("--variant", default=None, choices=VARIANTS)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output-dir", default="results")
    p.add_argument("--json", action="store_true", help="Also write the gate result as JSON")
    p.add_argument("--no-curve", action="store_true", help="Skip the 1 km sweep")
    p.set_defaults(func=cmd_reproduce)

    p = subs.add_parser("optimize", help="Optimal sending probability at fixed L")
    _add_param_source(p)
    p.add_argument("--variant", default="real", choices=VARIANTS)
    p.add_argument("--L", type=float, default=None, help="Distance in km (default: config L)")
    p.add_argument("--output", default=None, help="Optional JSON path")
    p.set_defaults(func=cmd_optimize)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.log_level)
    logger.debug("running %s", args.command)
    try:
        return args.func(args)
    except ParameterDomainError as exc:
        where = f" [{exc.parameter}]" if exc.parameter else ""
        print(f"error{where}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalDegeneracyError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())

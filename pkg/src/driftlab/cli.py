"""Command-line harness: named experiments, config files, CSV emission.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 for configuration errors. CSV is the only data output format; each file
embeds its full resolved configuration as '# key=value' header lines.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import __version__
from .conditions import check_conditions_empirical, check_conditions_exact, harvest_step_samples
from .core import default_workers, estimate_hitting_probability, run_trials
from .presets import WINDOW, PRESETS, ExperimentConfig, family_member, get_preset, load_config, with_overrides
from .reporting import (
    condition_report_columns,
    condition_report_rows,
    condition_summary,
    constants_trace,
    format_cell,
    write_csv,
)
from .stats import wilson_interval
from .theorem import derive_constants, hajek_escape_bound
from .inequalities import SWEEPS, sweep_comma_lambda, sweep_diversity, sweep_matching, sweep_mutation


class ConfigError(Exception):
    """Configuration problem; maps to exit code 2."""


def _resolve_config(args) -> ExperimentConfig:
    if args.preset and args.config:
        raise ConfigError("give either --preset or --config, not both")
    if args.preset:
        config = get_preset(args.preset)
    elif args.config:
        config = load_config(args.config)
    else:
        raise ConfigError("one of --preset or --config is required")
    return with_overrides(config, seed=args.seed, trials=args.trials, horizon=getattr(args, "horizon", None))


def _resolve_horizon(config: ExperimentConfig, ell: float) -> tuple[int, dict]:
    """Integer simulation horizon plus note fields for the CSV provenance.

    'auto' inverts the escape-bound product for the largest certified horizon
    and floors it at one step so the experiment simulates at least one
    transition; 'window' runs one step per unit of window length.
    """
    info: dict = {}
    if isinstance(config.horizon, int):
        return config.horizon, info
    if config.horizon == WINDOW:
        return max(1, math.ceil(ell)), info
    constants = derive_constants(config.eps, config.delta, config.r, ell, config.prob_target)
    certified = math.floor(constants.horizon) if math.isfinite(constants.horizon) else math.inf
    info["certified_horizon"] = constants.horizon
    if certified > config.max_steps:
        info["unresolved"] = True
        return -1, info
    return max(1, int(certified)), info


def cmd_simulate(args) -> int:
    config = _resolve_config(args)
    process = config.process()
    window = config.window()
    budget = config.budget()
    horizon, horizon_info = _resolve_horizon(config, window.ell)
    if horizon < 0:
        raise ConfigError(
            f"budget too small to resolve the certified horizon "
            f"{horizon_info.get('certified_horizon')} within max_steps={config.max_steps}"
        )
    if horizon > config.max_steps:
        raise ConfigError(f"horizon {horizon} exceeds max_steps {config.max_steps}")
    outcomes = run_trials(process, window, budget.trials, horizon, budget.master_seed, args.threads)
    hits = sum(1 for o in outcomes if o.hit_time is not None)
    lo, hi = wilson_interval(hits, budget.trials)
    point = hits / budget.trials
    provenance = config.provenance()
    provenance["resolved_horizon"] = horizon
    provenance.update(horizon_info)
    summary = (
        f"# summary: hits={hits} trials={budget.trials} point={format_cell(point)} "
        f"ci_low={format_cell(lo)} ci_high={format_cell(hi)}"
    )
    if args.out:
        write_csv(
            args.out,
            provenance,
            ["trial", "hit_time", "truncated", "x0"],
            ((o.index, o.hit_time, o.truncated, o.start_potential) for o in outcomes),
            trailer=summary,
        )
    print(
        f"{config.name}: hits {hits}/{budget.trials} within horizon {horizon}; "
        f"point {point:.6g}, 95% Wilson [{lo:.6g}, {hi:.6g}]"
    )
    return 0


def _check_report(config: ExperimentConfig):
    process = config.process()
    window = config.window()
    params = config.condition_params()
    table = process.jump_table()
    if table is not None:
        return check_conditions_exact(table, params, config.variant)
    drift_samples, tail_samples = harvest_step_samples(
        process, window, config.trials, config.max_steps, config.master_seed
    )
    if len(drift_samples) < 100 or len(tail_samples) < 100:
        raise ConfigError(
            f"insufficient samples harvested (drift {len(drift_samples)}, tail {len(tail_samples)}); "
            "increase trials or max_steps"
        )
    return check_conditions_empirical(drift_samples, tail_samples, params, config.variant)


def cmd_check(args) -> int:
    config = _resolve_config(args)
    process = config.process()
    if args.jump_table:
        table = process.jump_table()
        if table is None:
            raise ConfigError(
                f"process {config.process_kind!r} has a state-dependent step law; "
                "no exact jump table to export"
            )
        write_csv(
            args.jump_table,
            config.provenance(),
            ["j", "p_up", "p_down"],
            table.csv_rows(),
        )
    report = _check_report(config)
    provenance = config.provenance()
    if process.potential_scale != "identity":
        provenance["potential_scale"] = process.potential_scale
        print(f"note: potentials for {config.process_kind!r} are on the {process.potential_scale} scale")
    provenance["mode"] = report.mode
    provenance["drift"] = report.drift
    provenance["drift_verdict"] = report.drift_verdict
    if report.drift_ci is not None:
        provenance["drift_ci_low"], provenance["drift_ci_high"] = report.drift_ci
    provenance["overall"] = report.overall()
    if args.out:
        write_csv(args.out, provenance, condition_report_columns(), condition_report_rows(report))
    print(condition_summary(report))
    return 0 if report.passed() else 1


def cmd_constants(args) -> int:
    constants = derive_constants(args.eps, args.delta, args.r, args.ell, args.prob_target)
    print(constants_trace(constants))
    if args.out:
        trace = constants.derivation_trace()
        write_csv(
            args.out,
            {"command": "constants"},
            [sym for sym, _, _ in trace],
            [[value for _, _, value in trace]],
        )
    return 0


def cmd_bounds(args) -> int:
    suites = sorted(SWEEPS) if args.suite == "all" else [args.suite]
    failures = 0
    rows = 0
    all_columns = ["name", "parameters", "lhs", "rhs", "margin", "holds"]

    def emit():
        nonlocal failures, rows
        for suite in suites:
            for result in _suite_results(suite, args):
                rows += 1
                if not result.holds:
                    failures += 1
                params = ";".join(f"{k}={format_cell(v)}" for k, v in result.parameters.items())
                yield (result.name, params, result.lhs, result.rhs, result.margin, result.holds)

    provenance = {
        "command": "bounds",
        "suite": args.suite,
        "n_max": args.n_max,
        "m_max": args.m_max,
        "mu_max": args.mu_max,
        "phi_max": args.phi_max,
        "lambda_max": args.lambda_max,
        "j_max": args.j_max,
    }
    if args.out:
        write_csv(args.out, provenance, all_columns, emit())
    else:
        for _ in emit():
            pass
    print(f"bounds suite {args.suite}: {rows} links checked, {failures} failures")
    return 1 if failures else 0


def _suite_results(suite: str, args):
    if suite == "mutation":
        return sweep_mutation(n_max=args.n_max)
    if suite == "matching":
        return sweep_matching(m_max=args.m_max, j_max=args.j_max)
    if suite == "diversity":
        return sweep_diversity(mu_max=args.mu_max, phi_max=args.phi_max, j_max=min(args.j_max, 20))
    if suite == "comma-lambda":
        return sweep_comma_lambda(n_hi=args.n_max, lambda_max=args.lambda_max, j_max=args.j_max)
    raise ConfigError(f"unknown bounds suite {suite!r}")


def cmd_scaling(args) -> int:
    config = _resolve_config(args)
    if not config.ell_values:
        raise ConfigError("scaling needs ell_values (a comma-separated list in the config)")
    rows = []
    failures = 0
    unresolved = []
    for ell in config.ell_values:
        process, window = family_member(config, ell)
        constants = derive_constants(config.eps, config.delta, config.r, ell, config.prob_target)
        if isinstance(config.horizon, int):
            horizon = config.horizon
        elif config.horizon == WINDOW:
            horizon = max(1, math.ceil(ell))
        else:
            certified = math.floor(constants.horizon) if math.isfinite(constants.horizon) else math.inf
            horizon = max(1, certified) if certified <= config.max_steps else -1
        table = process.jump_table()
        if table is not None:
            exact = check_conditions_exact(table, config.condition_params(), "two_sided")
            condition_note = f"two-sided condition: {exact.overall().upper()}"
        else:
            condition_note = "empirical"
        if horizon < 0 or horizon > config.max_steps:
            unresolved.append(ell)
            rows.append(
                (ell, None, constants.horizon, None, config.trials, None, None, None, None,
                 condition_note, "unresolved: horizon exceeds max_steps")
            )
            continue
        estimate = estimate_hitting_probability(
            process, window, config.budget(), int(horizon), args.threads
        )
        bound = hajek_escape_bound(constants.lam, ell, horizon, constants.d_bound, constants.p_ell)
        note = ""
        if condition_note.endswith("PASS") and estimate.point > bound:
            failures += 1
            note = "empirical probability exceeds the certified bound"
        rows.append(
            (
                ell,
                horizon,
                constants.horizon,
                estimate.hits,
                estimate.trials,
                estimate.point,
                estimate.ci_low,
                estimate.ci_high,
                bound,
                condition_note,
                note,
            )
        )
    provenance = config.provenance()
    columns = [
        "ell",
        "horizon",
        "certified_horizon",
        "hits",
        "trials",
        "point",
        "ci_low",
        "ci_high",
        "escape_bound",
        "condition",
        "note",
    ]
    if args.out:
        write_csv(args.out, provenance, columns, rows)
    for row in rows:
        print(
            f"ell={format_cell(row[0])} horizon={format_cell(row[1])} "
            f"point={format_cell(row[5])} bound={format_cell(row[8])} [{row[9]}]"
            + (f" {row[10]}" if row[10] else "")
        )
    if unresolved:
        print(
            f"warning: budget too small to resolve ell in {unresolved}; "
            f"certified horizons exceed max_steps={config.max_steps}",
            file=sys.stderr,
        )
    return 1 if failures else 0


def cmd_list_presets(args) -> int:
    width = max(len(name) for name in PRESETS)
    for name in sorted(PRESETS):
        cfg = PRESETS[name]
        print(f"{name:<{width}}  {cfg.command:<8}  {cfg.description}")
    return 0


def _add_common(parser: argparse.ArgumentParser, with_horizon: bool = False) -> None:
    parser.add_argument("--preset", help="name of a compiled-in experiment")
    parser.add_argument("--config", help="path to a sectioned key-value config file")
    parser.add_argument("--seed", type=int, help="override the master seed (unsigned 64-bit)")
    parser.add_argument("--trials", type=int, help="override the trial count")
    parser.add_argument("--threads", type=int, default=default_workers(), help="worker processes for trials")
    parser.add_argument("--out", help="CSV output path")
    if with_horizon:
        parser.add_argument("--horizon", type=int, help="override the simulation horizon (steps)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="driftlab",
        description="Drift-analysis laboratory: simulate, check conditions, derive constants, sweep bounds.",
    )
    parser.add_argument("--version", action="version", version=f"driftlab {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("simulate", help="run trials and report the hitting probability")
    _add_common(p, with_horizon=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", help="check the drift and jump-tail conditions")
    _add_common(p)
    p.add_argument("--jump-table", dest="jump_table", help="also export the exact jump table CSV")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("constants", help="derive the escape-bound constants")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--prob-target", type=float, default=0.5, dest="prob_target")
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("bounds", help="run an inequality sweep suite")
    p.add_argument("--suite", choices=sorted(SWEEPS) + ["all"], default="all")
    p.add_argument("--n-max", type=int, default=200, dest="n_max")
    p.add_argument("--m-max", type=int, default=200, dest="m_max")
    p.add_argument("--mu-max", type=int, default=20, dest="mu_max")
    p.add_argument("--phi-max", type=int, default=50, dest="phi_max")
    p.add_argument("--lambda-max", type=int, default=64, dest="lambda_max")
    p.add_argument("--j-max", type=int, default=64, dest="j_max")
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("scaling", help="run a process family across window lengths")
    _add_common(p)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("list-presets", help="list compiled-in experiments")
    p.set_defaults(func=cmd_list_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

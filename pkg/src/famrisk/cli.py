"""Command-line front end.

Subcommands: solve-dichotomous, fit-beta, curves, simulate, report.

Exit codes: 0 success, 1 usage error, 2 infeasible / no solution, 3 I/O
error. The default RNG seed comes from the FAMRISK_SEED environment variable
(0 when unset); every command is deterministic given its flags and seed.
"""

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .betarisk import fit_from_risk_and_frr
from .dataset import DatasetParseError, DatasetValidationError, load_records
from .dichotomous import (DichotomousRiskModel, frr_curve, irr_given_frr,
                          solve_risk_structure)
from .errors import FamriskError
from .report import analyze_many, render_report, write_figures
from .simulate import SimulationConfig, estimate_gini_by_sampling, simulate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3

SEED_ENV_VAR = "FAMRISK_SEED"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the exit-code contract reserves 2 for
    # infeasible inputs, so usage failures exit 1 instead
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_code_on_error(message))

    def exit_code_on_error(self, message):
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return EXIT_USAGE


def _default_seed():
    raw = os.environ.get(SEED_ENV_VAR, "").strip()
    if not raw:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None


def _fmt(value, precision):
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return "undefined"
    return f"{value:.{precision}g}"


def _emit_pairs(pairs, fmt, precision):
    # pairs: ordered (key, value) with numeric or string values
    if fmt == "json":
        import json

        def clean(v):
            if isinstance(v, float) and math.isnan(v):
                return None
            return v

        print(json.dumps({k: clean(v) for k, v in pairs}, indent=2))
        return
    cells = [(k, v if isinstance(v, str) else _fmt(v, precision)) for k, v in pairs]
    if fmt == "csv":
        print(",".join(k for k, _ in cells))
        print(",".join(v for _, v in cells))
        return
    width = max(len(k) for k, _ in cells)
    for k, v in cells:
        print(f"{k.ljust(width)}  {v}")


def _cmd_solve_dichotomous(args):
    sol = solve_risk_structure(args.frr1, args.frr2)
    pairs = [("irr", sol.irr),
             ("q", math.nan if sol.degenerate else sol.q),
             ("residual_norm", sol.residual_norm),
             ("iterations", sol.iterations),
             ("degenerate", sol.degenerate)]
    if sol.degenerate:
        print("no risk heterogeneity: FRR1 = FRR2 = 1 gives irr = 1 and "
              "leaves q undefined", file=sys.stderr)
    _emit_pairs(pairs, args.format, args.precision)
    return EXIT_OK


def _cmd_fit_beta(args):
    model = fit_from_risk_and_frr(args.risk, args.frr)
    pairs = [("alpha", model.alpha), ("beta", model.beta),
             ("point_mass", model.point_mass),
             ("mean_risk", model.mean_risk()), ("frr", model.frr()),
             ("cv_squared", model.cv_squared()), ("gini", model.gini())]
    for pct in args.top or [10.0]:
        if not 0.0 < pct < 100.0:
            raise ValueError(f"--top must lie in (0, 100) percent, got {pct!r}")
        f = pct / 100.0
        tag = f"{pct:g}pct"
        pairs += [(f"top{tag}_share", model.top_share(f)),
                  (f"top{tag}_mean_risk_ratio", model.mean_risk_ratio(f)),
                  (f"top{tag}_median_risk_ratio", model.median_risk_ratio(f))]
    _emit_pairs(pairs, args.format, args.precision)
    return EXIT_OK


def _sweep_grid(args, default_min, default_max):
    lo = default_min if args.min is None else args.min
    hi = default_max if args.max is None else args.max
    if args.points < 1:
        raise ValueError(f"--points must be >= 1, got {args.points}")
    if args.points == 1:
        if args.min is None and args.max is None:
            raise ValueError("--points 1 needs an explicit --min or --max")
        lo = hi = args.min if args.min is not None else args.max
    elif not lo < hi:
        raise ValueError(f"need --min < --max, got [{lo!r}, {hi!r}]")
    return np.linspace(lo, hi, args.points)


def _cmd_curves(args):
    lines = []
    precision = args.precision
    if args.model == "dichotomous":
        affected = [1, 2] if args.affected == "both" else [int(args.affected)]
        if args.sweep in ("irr", "q"):
            if args.sweep == "irr":
                if args.q is None:
                    raise ValueError("--sweep irr needs --q")
                grid = _sweep_grid(args, 1.0, 20.0)
                series = [frr_curve("irr", grid, q=args.q, affected=k)[1]
                          for k in affected]
            else:
                if args.irr is None:
                    raise ValueError("--sweep q needs --irr")
                grid = _sweep_grid(args, 1e-4, 0.99)
                series = [frr_curve("q", grid, irr=args.irr, affected=k)[1]
                          for k in affected]
            lines.append(",".join([args.sweep] + [f"frr{k}" for k in affected]))
            for i, x in enumerate(grid):
                row = [f"{x:.{precision}g}"] + [f"{s[i]:.{precision}g}" for s in series]
                lines.append(",".join(row))
        elif args.sweep == "frr":
            if args.q is None:
                raise ValueError("--sweep frr needs --q")
            grid = _sweep_grid(args, 1.0, min(10.0, 0.9 / args.q))
            series = [[irr_given_frr(args.q, f, affected=k) for f in grid]
                      for k in affected]
            lines.append(",".join(["frr"] + [f"irr_given_frr{k}" for k in affected]))
            for i, x in enumerate(grid):
                row = [f"{x:.{precision}g}"] + [f"{s[i]:.{precision}g}" for s in series]
                lines.append(",".join(row))
        else:
            raise ValueError(f"--model dichotomous cannot sweep {args.sweep!r}")
    else:
        if args.risk is None or args.frr is None:
            raise ValueError("--model beta needs --risk and --frr")
        model = fit_from_risk_and_frr(args.risk, args.frr)
        if args.sweep == "lorenz":
            grid = _sweep_grid(args, 0.0, 1.0)
            burden = np.atleast_1d(model.lorenz_at(grid))
            lines.append("population_fraction,burden_share")
            for x, v in zip(grid, burden):
                lines.append(f"{x:.{precision}g},{v:.{precision}g}")
        elif args.sweep == "density":
            from .special import beta_pdf
            hi_default = (model.point_mass * 2.0 if model.is_point_mass
                          else float(model.quantile(0.999)))
            grid = _sweep_grid(args, 0.0, hi_default)
            lines.append("risk,density")
            for x in grid:
                dens = (math.inf if model.is_point_mass and x == model.point_mass
                        else 0.0 if model.is_point_mass
                        else beta_pdf(min(x, 1.0), model.params))
                lines.append(f"{x:.{precision}g},{dens:.{precision}g}")
        else:
            raise ValueError(f"--model beta cannot sweep {args.sweep!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _simulation_model(args):
    if args.model == "dichotomous":
        if args.q is None or args.irr is None:
            raise ValueError("--model dichotomous needs --q and --irr")
        return DichotomousRiskModel(q=args.q, irr=args.irr, low_risk=args.low_risk)
    if args.alpha is not None or args.beta is not None:
        if args.alpha is None or args.beta is None:
            raise ValueError("give both --alpha and --beta")
        from .betarisk import BetaRiskModel
        return BetaRiskModel.from_params(args.alpha, args.beta)
    if args.risk is None or args.frr is None:
        raise ValueError("--model beta needs --risk/--frr or --alpha/--beta")
    return fit_from_risk_and_frr(args.risk, args.frr)


def _cmd_simulate(args):
    seed = args.seed if args.seed is not None else _default_seed()
    model = _simulation_model(args)
    outcome = simulate(SimulationConfig(
        model=model, n_families=args.families, family_size=args.family_size,
        n_batches=args.batches, root_seed=seed))
    pairs = [("n_families", outcome.n_families),
             ("family_size", outcome.family_size),
             ("seed", seed)]
    for label, est in (("frr1", outcome.frr_one), ("frr2", outcome.frr_two)):
        pairs += [(label, est.value), (f"{label}_se", est.se),
                  (f"{label}_conditioning_events", est.events)]
        if not est.defined:
            print(f"warning: no conditioning events for {label}; estimate "
                  "undefined", file=sys.stderr)
    pairs += [("mean_risk", outcome.empirical_mean_risk),
              ("gini", outcome.empirical_gini.value),
              ("gini_se", outcome.empirical_gini.se)]
    if args.gini_oracle and not isinstance(model, DichotomousRiskModel):
        est = estimate_gini_by_sampling(model, args.families, seed + 1)
        pairs += [("gini_paired_sampling", est.value),
                  ("gini_paired_sampling_se", est.se)]
    _emit_pairs(pairs, args.format, args.precision)
    return EXIT_OK


def _cmd_report(args):
    seed = args.seed if args.seed is not None else _default_seed()
    records = load_records(args.data)
    results = analyze_many(records)
    sys.stdout.write(render_report(results, fmt=args.format,
                                   precision=args.precision))
    if args.figures:
        write_figures(results, Path(args.figures), seed)
    n_failed = sum(1 for r in results if r.error is not None)
    if results and n_failed == len(results):
        print("error: every record failed to analyze", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="famrisk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"famrisk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(p):
        p.add_argument("--format", choices=("table", "csv", "json"),
                       default="table", help="output format (default table)")
        p.add_argument("--precision", type=int, default=6,
                       help="significant digits for numeric output (default 6)")

    p = sub.add_parser("solve-dichotomous",
                       help="solve (FRR1, FRR2) for the two-group structure (irr, q)")
    p.add_argument("--frr1", type=float, required=True,
                   help="familial relative risk given one affected member")
    p.add_argument("--frr2", type=float, required=True,
                   help="familial relative risk given two affected members")
    add_common(p)
    p.set_defaults(func=_cmd_solve_dichotomous)

    p = sub.add_parser("fit-beta",
                       help="fit a beta risk distribution from lifetime risk and FRR")
    p.add_argument("--risk", type=float, required=True, help="lifetime (mean) risk")
    p.add_argument("--frr", type=float, required=True, help="familial relative risk")
    p.add_argument("--top", type=float, action="append", metavar="PCT",
                   help="report burden share and risk ratios for the top PCT%% "
                        "stratum (repeatable; default 10)")
    add_common(p)
    p.set_defaults(func=_cmd_fit_beta)

    p = sub.add_parser("curves", help="write sweep series for re-plotting the "
                                      "model curves")
    p.add_argument("--model", choices=("dichotomous", "beta"), default="dichotomous")
    p.add_argument("--sweep", required=True,
                   choices=("irr", "q", "frr", "lorenz", "density"))
    p.add_argument("--q", type=float, help="fixed high-risk fraction")
    p.add_argument("--irr", type=float, help="fixed individual relative risk")
    p.add_argument("--risk", type=float, help="lifetime risk (beta model)")
    p.add_argument("--frr", type=float, help="familial relative risk (beta model)")
    p.add_argument("--affected", choices=("1", "2", "both"), default="both",
                   help="conditioning count for dichotomous sweeps")
    p.add_argument("--min", type=float, help="sweep start")
    p.add_argument("--max", type=float, help="sweep end")
    p.add_argument("--points", type=int, default=201, help="grid size (default 201)")
    p.add_argument("--out", help="output path (default: stdout)")
    add_common(p)
    p.set_defaults(func=_cmd_curves)

    p = sub.add_parser("simulate", help="Monte Carlo family simulation")
    p.add_argument("--model", choices=("dichotomous", "beta"), required=True)
    p.add_argument("--q", type=float, help="high-risk fraction (dichotomous)")
    p.add_argument("--irr", type=float, help="risk ratio (dichotomous)")
    p.add_argument("--low-risk", type=float, dest="low_risk",
                   help="absolute low-group risk (default: population risk 0.01)")
    p.add_argument("--risk", type=float, help="lifetime risk (beta)")
    p.add_argument("--frr", type=float, help="familial relative risk (beta)")
    p.add_argument("--alpha", type=float, help="beta shape alpha (overrides --risk/--frr)")
    p.add_argument("--beta", type=float, help="beta shape beta")
    p.add_argument("--families", type=int, required=True, help="number of families")
    p.add_argument("--family-size", type=int, default=3, dest="family_size")
    p.add_argument("--batches", type=int, default=100,
                   help="replicate batches for standard errors (default 100)")
    p.add_argument("--seed", type=int, help=f"root seed (default ${SEED_ENV_VAR} or 0)")
    p.add_argument("--gini-oracle", action="store_true", dest="gini_oracle",
                   help="also run the paired-draw Gini estimator (beta model)")
    add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("report", help="full reproduction report over a dataset")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--data", help="dataset CSV path")
    group.add_argument("--bundled", action="store_true",
                       help="use the bundled dataset (default)")
    p.add_argument("--figures", help="directory for SVG figures and sample data")
    p.add_argument("--seed", type=int, help=f"root seed (default ${SEED_ENV_VAR} or 0)")
    add_common(p)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except FamriskError as exc:
        print(f"famrisk: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DatasetParseError, DatasetValidationError, OSError) as exc:
        print(f"famrisk: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"famrisk: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

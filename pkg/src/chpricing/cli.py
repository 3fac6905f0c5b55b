"""Experiment harness and command line interface.

Subcommands:
  run           price a 24-hour day with one method, settle, write CSVs
  curves        tabulate the cost curves and first-hour utility over demand
  uplift-curve  tabulate price and uplift over demand for a pricing rule

Outputs are byte-identical across runs with the same configuration and
seed, except for the wall-clock column of trace.csv.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

from .fleet import Fleet, FleetValidationError, builtin_fleet, load_fleet
from .hull import chp_fixed_demand, hull_value, uplift
from .market import (
    HOURS,
    DayProfile,
    DemandModel,
    default_profile,
    hourly_utility,
    inelastic_share,
    load_profile,
    sample_noise,
    synthetic_profile,
)
from .pricing import (
    METHODS,
    HarmonicStep,
    IterateRecord,
    PricingTrace,
    dispatchable_equilibrium,
    dispatchable_price,
    dual_value,
    exact_dual,
    run_lmp,
    run_subgradient,
)
from .ucp import (
    InfeasibleError,
    no_startup_value,
    quadratic_fit,
    relaxed_value,
    ucp_value,
)
from .welfare import HourResult, settle_hour, summarize_day

__all__ = ["ExperimentConfig", "run_experiment", "emit_cost_curves",
           "emit_uplift_curves", "main", "FIXTURE_DEFAULTS"]

# demand-model and loop defaults for the builtin fleets
FIXTURE_DEFAULTS = {
    "gribik": dict(a=3.9e4, mu1=0.8, mu2=0.2, nu=0.01, utility_constant=20000.0,
                   lambda0=100.0, step_coef=0.1, n_iters=100),
    "scarf": dict(a=455.0, mu1=0.8, mu2=0.2, nu=0.0025, utility_constant=500.0,
                  lambda0=10.0, step_coef=0.01, n_iters=100),
}

HOURS_COLUMNS = ("t", "price", "demand", "cost", "uplift", "utility_gross",
                 "utility_net", "profit", "welfare", "status")
TRACE_COLUMNS = ("t", "k", "price", "demand", "supply", "step", "dual_value",
                 "uplift", "elapsed_s")
SUMMARY_COLUMNS = ("price_min", "price_mean", "price_max", "total_demand",
                   "total_utility_gross", "total_utility_net", "total_profit",
                   "total_welfare", "total_uplift", "settled_hours")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one day run."""

    fleet: str              # 'gribik', 'scarf', or a path to a fleet file
    method: str             # chp_subgradient | chp_exact | lmp | dispatchable
    out_dir: str
    a: float
    mu1: float
    mu2: float
    nu: float
    utility_constant: float
    lambda0: float
    n_iters: int
    step_coef: float
    seed: int = 0
    jobs: int = 1
    no_noise: bool = False
    profile_path: str | None = None
    synthetic: tuple[float, float, float] | None = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")


def _resolve_fleet(source: str) -> Fleet:
    if source in FIXTURE_DEFAULTS:
        return builtin_fleet(source)
    return load_fleet(Path(source).read_text())


def _resolve_profile(config: ExperimentConfig) -> DayProfile:
    if config.profile_path is not None:
        base = load_profile(Path(config.profile_path).read_text())
    elif config.synthetic is not None:
        base = DayProfile(synthetic_profile(*config.synthetic))
    else:
        base = default_profile()
    noise = (0.0,) * HOURS if config.no_noise else sample_noise(config.seed)
    return DayProfile(base.base_demand, noise)


def _single_record_trace(method: str, fleet: Fleet, model: DemandModel,
                         profile: DayProfile, t: int, price: float,
                         demand: float) -> PricingTrace:
    phi, sub = dual_value(fleet, model, profile, t, price)
    record = IterateRecord(
        k=0, price=price, demand=demand, supply=sub + demand, step=0.0,
        dual_value=phi, uplift=uplift(fleet, price, demand), elapsed_s=0.0)
    return PricingTrace(method, (record,), price, demand)


def _price_hour(t: int, fleet: Fleet, model: DemandModel, profile: DayProfile,
                method: str, lambda0: float, n_iters: int,
                step_rule: HarmonicStep) -> PricingTrace:
    if method == "chp_subgradient":
        return run_subgradient(fleet, model, profile, t, lambda0, n_iters, step_rule)
    if method == "chp_exact":
        price, demand = exact_dual(fleet, model, profile, t)
        return _single_record_trace(method, fleet, model, profile, t, price, demand)
    if method == "lmp":
        quad = quadratic_fit(fleet)
        return run_lmp(quad, model, profile, t, lambda0, n_iters, step_rule,
                       uplift_fleet=fleet)
    if method == "dispatchable":
        price, demand = dispatchable_equilibrium(fleet, model, profile, t)
        return _single_record_trace(method, fleet, model, profile, t, price, demand)
    raise ValueError(f"unknown method {method}")


def _run_one_hour(t: int, fleet: Fleet, model: DemandModel, profile: DayProfile,
                  method: str, lambda0: float, n_iters: int,
                  step_rule: HarmonicStep
                  ) -> tuple[int, PricingTrace, HourResult | None, str]:
    trace = _price_hour(t, fleet, model, profile, method, lambda0, n_iters, step_rule)
    try:
        result = settle_hour(fleet, model, profile, t, trace.final_price)
        return t, trace, result, "ok"
    except InfeasibleError:
        return t, trace, None, "infeasible"


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_csv(path: Path, header: tuple[str, ...], rows: list[list[str]]) -> None:
    lines = [",".join(header)] + [",".join(row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def run_experiment(config: ExperimentConfig) -> dict[str, Path]:
    """Price and settle the 24 hours; write hours.csv, trace.csv, summary.csv."""
    fleet = _resolve_fleet(config.fleet)
    model = DemandModel(a=config.a, mu1=config.mu1, mu2=config.mu2, nu=config.nu,
                        utility_constant=config.utility_constant)
    profile = _resolve_profile(config)
    step_rule = HarmonicStep(config.step_coef)
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    worker = partial(_run_one_hour, fleet=fleet, model=model, profile=profile,
                     method=config.method, lambda0=config.lambda0,
                     n_iters=config.n_iters, step_rule=step_rule)
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(worker, range(HOURS)))
    else:
        outcomes = [worker(t) for t in range(HOURS)]
    outcomes.sort(key=lambda item: item[0])

    hour_rows = []
    trace_rows = []
    settled: list[HourResult] = []
    for t, trace, result, status in outcomes:
        for rec in trace.records:
            trace_rows.append([str(t), str(rec.k), _fmt(rec.price), _fmt(rec.demand),
                               _fmt(rec.supply), _fmt(rec.step), _fmt(rec.dual_value),
                               _fmt(rec.uplift), _fmt(rec.elapsed_s)])
        if result is None:
            hour_rows.append([str(t), _fmt(trace.final_price), _fmt(trace.final_demand),
                              "", "", "", "", "", "", status])
        else:
            settled.append(result)
            hour_rows.append([str(t), _fmt(result.price), _fmt(result.demand),
                              _fmt(result.supply_cost), _fmt(result.uplift),
                              _fmt(result.utility_gross), _fmt(result.utility_net),
                              _fmt(result.supplier_profit), _fmt(result.social_welfare),
                              status])

    if len(settled) == HOURS:
        s = summarize_day(settled)
        summary_row = [_fmt(s.price_min), _fmt(s.price_mean), _fmt(s.price_max),
                       _fmt(s.total_demand), _fmt(s.total_utility_gross),
                       _fmt(s.total_utility_net), _fmt(s.total_supplier_profit),
                       _fmt(s.total_social_welfare), _fmt(s.total_uplift),
                       str(HOURS)]
    else:
        # a broken day gets no aggregates, only the settled-hour count
        summary_row = [""] * 9 + [str(len(settled))]

    paths = {
        "hours": out / "hours.csv",
        "trace": out / "trace.csv",
        "summary": out / "summary.csv",
    }
    _write_csv(paths["hours"], HOURS_COLUMNS, hour_rows)
    _write_csv(paths["trace"], TRACE_COLUMNS, trace_rows)
    _write_csv(paths["summary"], SUMMARY_COLUMNS, [summary_row])
    return paths


def _demand_grid(capacity: float, step_mw: float) -> list[float]:
    if not step_mw > 0:
        raise ValueError(f"step-mw must be > 0, got {step_mw}")
    grid = []
    y = 0.0
    while y < capacity - 1e-9:
        grid.append(y)
        y += step_mw
    grid.append(capacity)
    return grid


def emit_cost_curves(fleet: Fleet, grid_step: float, out_dir: str | Path,
                     model: DemandModel | None = None,
                     profile: DayProfile | None = None) -> Path:
    """Write curves.csv: the cost curves and the first hour's gross utility.

    Cells that are undefined (utility at or below the inelastic floor)
    are left empty.
    """
    quad = quadratic_fit(fleet)
    rows = []
    for y in _demand_grid(fleet.total_capacity, grid_step):
        v, _ = ucp_value(fleet, y)
        v_relaxed, _ = relaxed_value(fleet, y)
        point = hull_value(fleet, y)
        if model is not None and profile is not None \
                and y > inelastic_share(model, profile, 0):
            u1 = _fmt(hourly_utility(model, profile, 0, y))
        else:
            u1 = ""
        rows.append([_fmt(y), _fmt(v), _fmt(v_relaxed),
                     _fmt(no_startup_value(fleet, y)), _fmt(quad.cost(y)),
                     _fmt(point.hull_value), u1])
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "curves.csv"
    _write_csv(path, ("y", "v", "v_relaxed", "v_no_startup", "v_quadratic",
                      "v_hull", "U_1"), rows)
    return path


def emit_uplift_curves(fleet: Fleet, rule: str, grid_step: float,
                       out_dir: str | Path) -> Path:
    """Write uplift_curve.csv: price and uplift over demand for one rule."""
    if rule not in ("chp", "dispatchable"):
        raise ValueError(f"rule must be 'chp' or 'dispatchable', got {rule}")
    rows = []
    for y in _demand_grid(fleet.total_capacity, grid_step):
        if rule == "chp":
            price = chp_fixed_demand(fleet, y)
        else:
            price = dispatchable_price(fleet, y)
        rows.append([_fmt(y), _fmt(price), _fmt(uplift(fleet, price, y))])
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "uplift_curve.csv"
    _write_csv(path, ("y", "price", "uplift"), rows)
    return path


def _parse_step(text: str, fleet: str) -> float:
    if text == "paper":
        if fleet not in FIXTURE_DEFAULTS:
            raise ValueError(
                "--step paper needs a builtin fleet; use --step c/k:VALUE")
        return FIXTURE_DEFAULTS[fleet]["step_coef"]
    if text.startswith("c/k:"):
        coef = float(text[len("c/k:"):])
        if coef <= 0:
            raise ValueError(f"step coefficient must be > 0, got {coef}")
        return coef
    raise ValueError(f"--step must be 'paper' or 'c/k:VALUE', got {text!r}")


def _parse_synthetic(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"--synthetic needs MIN,MEAN,MAX, got {text!r}")
    low, mean, high = (float(p) for p in parts)
    return low, mean, high


def _model_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=float, help="elastic utility scale")
    parser.add_argument("--nu", type=float, help="profile-to-fleet demand scale")
    parser.add_argument("--mu1", type=float, help="inelastic share weight")
    parser.add_argument("--mu2", type=float, help="elastic share weight")
    parser.add_argument("--utility-constant", type=float,
                        help="additive constant of the hourly utility")


def _resolve_model_params(args: argparse.Namespace) -> dict[str, float]:
    defaults = FIXTURE_DEFAULTS.get(args.fleet)
    params = {}
    for key, fallback in (("a", None), ("nu", None), ("mu1", 0.8), ("mu2", 0.2),
                          ("utility_constant", 0.0)):
        given = getattr(args, key)
        if given is not None:
            params[key] = given
        elif defaults is not None:
            params[key] = defaults[key]
        elif fallback is not None:
            params[key] = fallback
        else:
            raise ValueError(f"--{key} is required for a custom fleet file")
    return params


def _cmd_run(args: argparse.Namespace) -> int:
    params = _resolve_model_params(args)
    defaults = FIXTURE_DEFAULTS.get(args.fleet, {})
    lambda0 = args.lambda0 if args.lambda0 is not None \
        else defaults.get("lambda0", 100.0)
    n_iters = args.iters if args.iters is not None else defaults.get("n_iters", 100)
    config = ExperimentConfig(
        fleet=args.fleet,
        method=args.method.replace("-", "_"),
        out_dir=args.out,
        lambda0=lambda0,
        n_iters=n_iters,
        step_coef=_parse_step(args.step, args.fleet),
        seed=args.seed,
        jobs=args.jobs,
        no_noise=args.no_noise,
        profile_path=args.profile,
        synthetic=_parse_synthetic(args.synthetic) if args.synthetic else None,
        **params,
    )
    paths = run_experiment(config)
    for name in ("hours", "trace", "summary"):
        print(paths[name])
    return 0


def _cmd_curves(args: argparse.Namespace) -> int:
    fleet = _resolve_fleet(args.fleet)
    model = profile = None
    if args.fleet in FIXTURE_DEFAULTS or (args.a is not None and args.nu is not None):
        params = _resolve_model_params(args)
        model = DemandModel(**params)
        profile = default_profile()
    path = emit_cost_curves(fleet, args.step_mw, args.out, model, profile)
    print(path)
    return 0


def _cmd_uplift_curve(args: argparse.Namespace) -> int:
    fleet = _resolve_fleet(args.fleet)
    path = emit_uplift_curves(fleet, args.rule, args.step_mw, args.out)
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chpricing",
        description="Convex hull pricing experiments for startup-cost fleets")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="price and settle a 24-hour day")
    run_p.add_argument("--fleet", required=True,
                       help="gribik, scarf, or a path to a fleet JSON file")
    run_p.add_argument("--method", required=True,
                       choices=["chp-subgradient", "chp-exact", "lmp", "dispatchable"])
    run_p.add_argument("--profile", help="CSV day profile (hour,d1)")
    run_p.add_argument("--synthetic", metavar="MIN,MEAN,MAX",
                       help="synthetic diurnal profile statistics")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--iters", type=int, default=None)
    run_p.add_argument("--step", default="paper",
                       help="'paper' (builtin default) or 'c/k:VALUE'")
    run_p.add_argument("--lambda0", type=float, default=None)
    run_p.add_argument("--out", required=True)
    run_p.add_argument("--jobs", type=int, default=1)
    run_p.add_argument("--no-noise", action="store_true")
    _model_args(run_p)
    run_p.set_defaults(func=_cmd_run)

    curves_p = sub.add_parser("curves", help="tabulate cost curves over demand")
    curves_p.add_argument("--fleet", required=True)
    curves_p.add_argument("--step-mw", type=float, default=1.0)
    curves_p.add_argument("--out", required=True)
    _model_args(curves_p)
    curves_p.set_defaults(func=_cmd_curves)

    uplift_p = sub.add_parser("uplift-curve",
                              help="tabulate price and uplift for a rule")
    uplift_p.add_argument("--fleet", required=True)
    uplift_p.add_argument("--rule", required=True, choices=["chp", "dispatchable"])
    uplift_p.add_argument("--step-mw", type=float, default=1.0)
    uplift_p.add_argument("--out", required=True)
    uplift_p.set_defaults(func=_cmd_uplift_curve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FleetValidationError, InfeasibleError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

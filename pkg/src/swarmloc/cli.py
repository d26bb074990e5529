"""Command-line front end: ``swarmloc {deploy,run,mc,sweep,cdf,variants}``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .detector import classify
from .errors import SwarmlocError
from .harness import (
    BEST_SEVEN,
    TSE,
    build_config,
    cdf_config,
    derive_seed,
    load_config_file,
    run_experiment,
    trial_noise_rng,
    trial_scenario,
)
from .measurement import synthesize
from .metrics import median_error
from .objective import LocalizationObjective
from .pso import convergence_iteration, run
from .scenario import deploy_network, write_scenario_csv
from .schedules import variant_table
from .tse import tse_solve

# CLI flag -> settings key understood by build_config
FLAG_KEYS = {
    "seed": "seed", "trials": "trials", "variants": "variants", "n_sus": "n_sus", "snr0_db": "snr0_db",
    "emitter": "emitter", "out": "out_dir", "iterations": "max_iterations", "workers": "workers",
    "deploy_seed": "deploy_seed", "checkpoints": "checkpoints", "pu_distance": "pu_distance",
    "pu_threshold": "pu_threshold",
}


def _common(p: argparse.ArgumentParser, defaults: dict | None = None) -> None:
    p.add_argument("--config", type=Path, help="key = value settings file; flags override it")
    p.add_argument("--seed", type=int, help="master seed (default 0)")
    p.add_argument("--trials", type=int, help="Monte Carlo trials (default 1000)")
    p.add_argument("--variants", help="comma-separated variant names, 'all', or include TSE")
    p.add_argument("--n-sus", type=int, help="number of secondary users (default 100)")
    p.add_argument("--snr0-db", type=float, help="SNR at the base station in dB (default -10)")
    p.add_argument("--emitter", help="true emitter 'x,y' in meters or 'pu' (default 8000,1000)")
    p.add_argument("--no-noise", action="store_true", help="synthesize exact range differences")
    p.add_argument("--out", help="output directory")
    p.add_argument("--redeploy-per-trial", action="store_true", help="draw a new SU layout every trial")
    p.add_argument("--iterations", type=int, help="PSO iteration budget T (default 150)")
    p.add_argument("--workers", type=int, help="parallel trial processes (default 1)")
    p.add_argument("--deploy-seed", type=int, help="seed of the fixed SU layout (default 0)")
    p.add_argument("--pu-distance", type=float, help="PU tower distance from the BS in meters")
    p.add_argument("--pu-threshold", type=float, help="PU decision radius in meters (default 1000)")
    p.add_argument("--checkpoints", help="comma-separated iterations for the error-vs-iteration table")
    if defaults:
        p.set_defaults(**{f"default_{k}": v for k, v in defaults.items()})


def _settings(args) -> dict:
    settings = {}
    for k, v in vars(args).items():
        if k.startswith("default_"):
            settings[k[len("default_"):]] = v
    if args.config is not None:
        settings.update(load_config_file(args.config))
    for flag, key in FLAG_KEYS.items():
        value = getattr(args, flag, None)
        if value is not None:
            settings[key] = value
    if args.no_noise:
        settings["noise_enabled"] = False
    if args.redeploy_per_trial:
        settings["redeploy_per_trial"] = True
    return settings


def cmd_variants(args) -> int:
    for v in variant_table():
        print(f"{v.name}\t{v.inertia}\t{v.accel}")
    return 0


def cmd_deploy(args) -> int:
    cfg = build_config(_settings(args))
    scenario = trial_scenario(cfg, 0, deploy_network(cfg.deploy))
    if cfg.out_dir is None:
        write_scenario_csv(scenario, sys.stdout)
    else:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_scenario_csv(scenario, out / "scenario.csv")
        print(out / "scenario.csv")
    return 0


def cmd_run(args) -> int:
    """One trial, every requested method, with a verbose per-method summary."""
    cfg = build_config(_settings(args))
    cfg.validate()
    scenario = trial_scenario(cfg, 0, deploy_network(cfg.deploy))
    measurements = synthesize(scenario, cfg.noise, trial_noise_rng(cfg, 0))
    obj = LocalizationObjective.from_scenario(scenario, measurements)
    out = Path(cfg.out_dir) if cfg.out_dir else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        write_scenario_csv(scenario, out / "scenario.csv")
        measurements.to_csv(out / "measurements.csv")
    decisions = []
    for name in cfg.methods():
        if name == TSE:
            res = tse_solve(obj, cfg.tse)
            est = np.asarray(res.estimate)
            print(f"{name:8s} estimate=({est[0]:.2f}, {est[1]:.2f}) converged={res.converged} "
                  f"iterations={res.iterations_used}")
        else:
            pcfg = replace(cfg.pso, variant=name, max_iterations=cfg.budget(name), seed=derive_seed(cfg.seed, 2))
            trace = run(pcfg, obj)
            est = trace.estimate
            print(f"{name:8s} estimate=({est[0]:.2f}, {est[1]:.2f}) fitness={trace.final_fitness:.6g} "
                  f"converged_at={convergence_iteration(trace, cfg.rel_tol)} time={trace.duration_s:.3f}s")
            if out is not None:
                trace.to_csv(out / f"trace_{name}.csv")
        d = classify(est, scenario, cfg.pu_threshold, cfg.su_threshold)
        decisions.append(d.to_json(variant=name))
        print(f"         verdict={d.verdict.value} suspect_su={d.suspect_su}")
    if out is not None:
        (out / "decisions.jsonl").write_text("".join(line + "\n" for line in decisions))
    return 0


def cmd_mc(args) -> int:
    cfg = build_config(_settings(args))
    bundle = run_experiment(cfg)
    for row in bundle.convergence:
        print(f"{row['variant']:8s} mean convergence iteration {row['mean_convergence_iteration']:.1f}")
    for name, (z, F) in bundle.cdf.items():
        print(f"{name:8s} median error {median_error(z):.2f} m")
    if cfg.out_dir:
        print(f"wrote {cfg.out_dir}")
    return 0


def cmd_sweep(args) -> int:
    cfg = build_config(_settings(args))
    bundle = run_experiment(cfg)
    names = [m for m in cfg.methods() if m != TSE]
    print("t\t" + "\t".join(names))
    for t in cfg.checkpoints:
        vals = {r["variant"]: r["rms"] for r in bundle.mse_table if r["t"] == t}
        print(f"{t}\t" + "\t".join(f"{vals[n]:.1f}" if n in vals else "-" for n in names))
    if cfg.out_dir:
        print(f"wrote {cfg.out_dir}")
    return 0


def cmd_cdf(args) -> int:
    base = build_config(_settings(args))
    cfg = cdf_config(base, base.variants)
    bundle = run_experiment(cfg)
    for name, (z, F) in bundle.cdf.items():
        print(f"{name:8s} median error {median_error(z):.2f} m")
    if cfg.out_dir:
        print(f"wrote {cfg.out_dir}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmloc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("variants", help="list the 39 PSO variants")
    p.set_defaults(func=cmd_variants)

    p = sub.add_parser("deploy", help="emit the scenario CSV")
    _common(p)
    p.set_defaults(func=cmd_deploy)

    p = sub.add_parser("run", help="single trial with a verbose trace")
    _common(p, {"variants": "MPSO11"})
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("mc", help="full Monte Carlo experiment")
    _common(p, {"out_dir": "results/mc"})
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("sweep", help="error versus iteration for the best variants")
    _common(p, {"variants": ",".join(("PSO",) + BEST_SEVEN), "out_dir": "results/sweep"})
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("cdf", help="error CDF of PSO, MPSO11 and TSE")
    _common(p, {"variants": f"PSO,MPSO11,{TSE}", "n_sus": 10, "out_dir": "results/cdf"})
    p.set_defaults(func=cmd_cdf)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SwarmlocError, OSError) as exc:
        print(f"swarmloc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Monte Carlo experiment runner and report writer.

Every trial draws fresh measurement noise (and optionally a fresh SU layout)
and runs each configured method on the *same* range-difference set, so method
comparisons are paired.  All randomness derives from the master seed:

* layout of trial ``k`` (when redeploying): ``SeedSequence(seed, spawn_key=(0, k))``
* measurement noise of trial ``k``:        ``SeedSequence(seed, spawn_key=(1, k))``
* swarm streams:                           ``SeedSequence(seed, spawn_key=(2,))``, then
  keyed by ``(trial, particle)`` inside the swarm engine

so results do not depend on the order in which trials execute.
"""

from __future__ import annotations

import configparser
import csv
import json
import math
import os
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from .detector import DEFAULT_PU_THRESHOLD, classify
from .errors import ConfigError, DegenerateGeometryError, DivergenceError, UsageError
from .measurement import NoiseModel, synthesize
from .metrics import cdf_curve
from .objective import LocalizationObjective
from .pso import PsoConfig, convergence_iteration, run
from .scenario import DeployConfig, Point, Scenario, deploy_network, write_scenario_csv
from .schedules import get_variant, resolve_variants
from .tse import TseConfig, tse_solve

TSE = "TSE"
SWEEP_CHECKPOINTS = (1, 2, 3, 4, 5, 10, 15, 20, 25, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150)
BEST_SEVEN = ("PSO10", "PSO12", "MPSO10", "MPSO11", "MPSO12", "IPSO11", "IPSO12")
CDF_ITERATIONS = {"MPSO11": 10, "PSO": 150}


@dataclass(frozen=True)
class ExperimentConfig:
    deploy: DeployConfig = DeployConfig()
    noise: NoiseModel = NoiseModel()
    pso: PsoConfig = PsoConfig()
    variants: tuple = ("all",)
    iterations: dict = field(default_factory=dict)
    tse: TseConfig = TseConfig()
    trials: int = 1000
    emitter: Point | str = Point(8000.0, 1000.0)
    pu_threshold: float = DEFAULT_PU_THRESHOLD
    su_threshold: float | None = None
    checkpoints: tuple = SWEEP_CHECKPOINTS
    rel_tol: float = 0.05
    seed: int = 0
    redeploy_per_trial: bool = False
    workers: int = 1
    out_dir: str | None = None

    def methods(self) -> list[str]:
        """Variant names in configured order, with ``TSE`` last when requested."""
        names = list(self.variants)
        want_tse = TSE in names
        names = [n for n in names if n != TSE]
        specs = resolve_variants(names) if names else []
        out = list(dict.fromkeys(v.name for v in specs))
        return out + [TSE] if want_tse else out

    def pso_methods(self) -> list[str]:
        return [m for m in self.methods() if m != TSE]

    def budget(self, name: str) -> int:
        return int(self.iterations.get(name, self.pso.max_iterations))

    def validate(self) -> None:
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigError("trials", f"must be a positive integer, got {self.trials!r}")
        methods = self.methods()
        if not methods:
            raise ConfigError("variants", "no method selected")
        for name, T in self.iterations.items():
            get_variant(name)
            if T < 1:
                raise ConfigError("iterations", f"{name}: budget must be >= 1")
        T_max = max((self.budget(m) for m in self.pso_methods()), default=1)
        bad = [t for t in self.checkpoints if not 1 <= t <= T_max]
        if bad:
            raise UsageError(f"checkpoints {bad} outside [1, {T_max}]")
        if self.workers < 1:
            raise ConfigError("workers", "must be >= 1")
        if not self.rel_tol > 0:
            raise ConfigError("rel_tol", "must be positive")
        self.deploy.validate()
        self.noise.validate()


@dataclass
class MethodOutcome:
    estimate: np.ndarray | None
    checkpoints: np.ndarray | None = None  # gbest positions at the configured checkpoints
    convergence: int | None = None
    final_fitness: float | None = None
    duration_s: float = 0.0
    status: str = "ok"


@dataclass
class TrialResult:
    trial: int
    digest: str
    outcomes: dict
    decisions: dict


@dataclass
class ReportBundle:
    config: ExperimentConfig
    convergence: list
    mse_table: list
    cdf: dict
    decisions: list
    timing: dict
    digests: list
    scenario: Scenario | None = None

    def write(self, out_dir) -> Path:
        out = Path(out_dir)
        _prepare_out_dir(out)
        _write_rows(out / "convergence.csv", ("variant", "mean_convergence_iteration", "trials"), (
            (r["variant"], repr(r["mean_convergence_iteration"]), r["trials"]) for r in self.convergence
        ))
        _write_rows(out / "mse_vs_iteration.csv", ("variant", "t", "mse", "rms", "bias2", "n"), (
            (r["variant"], r["t"], repr(r["mse"]), repr(r["rms"]), repr(r["bias2"]), r["n"])
            for r in self.mse_table
        ))
        _write_rows(out / "cdf.csv", ("variant", "z_m", "F"), (
            (name, repr(float(z)), repr(float(F)))
            for name, (zs, Fs) in self.cdf.items()
            for z, F in zip(zs, Fs)
        ))
        with open(out / "decisions.jsonl", "w") as fh:
            for d in self.decisions:
                fh.write(json.dumps(d, sort_keys=True) + "\n")
        if self.scenario is not None:
            write_scenario_csv(self.scenario, out / "scenario.csv")
        with open(out / "meta.json", "w") as fh:
            json.dump(run_metadata(self.config), fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")
        # wall-clock numbers vary run to run, so they stay out of the CSV tables
        with open(out / "timing.json", "w") as fh:
            json.dump(self.timing, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return out


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def run_metadata(cfg: ExperimentConfig) -> dict:
    return {
        "config": {k: v for k, v in asdict(cfg).items() if k != "out_dir"},
        "methods": cfg.methods(),
        "seed": cfg.seed,
        "versions": {"swarmloc": __version__, "numpy": np.__version__, "python": platform.python_version()},
    }


def derive_seed(seed: int, *key) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=key).generate_state(1)[0])


def trial_scenario(cfg: ExperimentConfig, trial: int, base: Scenario | None = None) -> Scenario:
    if cfg.redeploy_per_trial or base is None:
        deploy = replace(cfg.deploy, seed=derive_seed(cfg.seed, 0, trial)) if cfg.redeploy_per_trial else cfg.deploy
        base = deploy_network(deploy)
    return base.with_emitter(base.pu if cfg.emitter == "pu" else cfg.emitter)


def trial_noise_rng(cfg: ExperimentConfig, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed, spawn_key=(1, trial))))


def run_trial(cfg: ExperimentConfig, trial: int, base: Scenario | None = None) -> TrialResult:
    """Synthesize one measurement set and run every configured method on it."""
    scenario = trial_scenario(cfg, trial, base)
    measurements = synthesize(scenario, cfg.noise, trial_noise_rng(cfg, trial))
    obj = LocalizationObjective.from_scenario(scenario, measurements)
    pso_seed = derive_seed(cfg.seed, 2)

    outcomes, decisions = {}, {}
    for name in cfg.methods():
        if name == TSE:
            outcome = _run_tse(cfg, obj)
        else:
            T = cfg.budget(name)
            pcfg = replace(cfg.pso, variant=name, max_iterations=T, seed=pso_seed)
            trace = run(pcfg, obj, trial=trial)
            cps = [min(t, T) for t in cfg.checkpoints]
            outcome = MethodOutcome(
                estimate=trace.estimate.copy(),
                checkpoints=trace.positions[cps].copy(),
                convergence=convergence_iteration(trace, cfg.rel_tol),
                final_fitness=trace.final_fitness,
                duration_s=trace.duration_s,
            )
        outcomes[name] = outcome
        if outcome.estimate is None:
            decisions[name] = {"verdict": None, "status": outcome.status}
        else:
            d = classify(outcome.estimate, scenario, cfg.pu_threshold, cfg.su_threshold)
            decisions[name] = {**d.to_dict(), "status": outcome.status}
    return TrialResult(trial, measurements.digest(), outcomes, decisions)


def _run_tse(cfg: ExperimentConfig, obj) -> MethodOutcome:
    try:
        res = tse_solve(obj, cfg.tse)
    except DivergenceError:
        return MethodOutcome(None, status="diverged")
    except DegenerateGeometryError:
        return MethodOutcome(None, status="degenerate")
    return MethodOutcome(
        estimate=np.asarray(res.estimate),
        convergence=res.iterations_used,
        status="ok" if res.converged else "not_converged",
    )


def _execute(cfg: ExperimentConfig, base: Scenario | None) -> list[TrialResult]:
    job = partial(run_trial, cfg, base=base)
    trials = range(int(cfg.trials))
    if cfg.workers == 1:
        return [job(k) for k in trials]
    chunk = max(1, int(cfg.trials) // (4 * cfg.workers))
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(job, trials, chunksize=chunk))


def run_experiment(cfg: ExperimentConfig) -> ReportBundle:
    """Run all trials, reduce them into tables, and write them when ``out_dir`` is set."""
    cfg.validate()
    if cfg.out_dir is not None:
        _prepare_out_dir(Path(cfg.out_dir))
    base = None if cfg.redeploy_per_trial else deploy_network(cfg.deploy)
    results = _execute(cfg, base)
    bundle = reduce_results(cfg, results, base)
    if cfg.out_dir is not None:
        bundle.write(cfg.out_dir)
    return bundle


def _prepare_out_dir(out: Path) -> None:
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror or exc}") from exc
    if not os.access(out, os.W_OK):
        raise OSError(f"output directory {out} is not writable")


def _truth(cfg: ExperimentConfig, trial: int, base: Scenario | None) -> np.ndarray:
    if cfg.emitter == "pu":
        return np.asarray(trial_scenario(cfg, trial, base).pu)
    return np.asarray(cfg.emitter, dtype=float)


def reduce_results(cfg: ExperimentConfig, results: list[TrialResult], base: Scenario | None) -> ReportBundle:
    truths = np.array([_truth(cfg, r.trial, base) for r in results])
    n = len(results)
    convergence, mse_rows, cdf, timing = [], [], {}, {}

    for name in cfg.methods():
        outs = [r.outcomes[name] for r in results]
        if name != TSE:
            conv = np.array([o.convergence for o in outs], dtype=float)
            convergence.append({"variant": name, "mean_convergence_iteration": float(conv.mean()), "trials": n})
            timing[name] = {"mean_wall_time_s": float(np.mean([o.duration_s for o in outs]))}
            T = cfg.budget(name)
            cps = np.stack([o.checkpoints for o in outs])  # (n, C, 2)
            for j, t in enumerate(cfg.checkpoints):
                if t > T:
                    continue
                d = cps[:, j] - truths
                sq = d[:, 0] ** 2 + d[:, 1] ** 2
                m = float(sq.mean())
                bias = d.mean(axis=0)
                mse_rows.append({
                    "variant": name, "t": int(t), "mse": m, "rms": math.sqrt(m),
                    "bias2": float(bias @ bias), "n": n,
                })
        errs = np.array([
            np.inf if o.estimate is None else float(np.hypot(*(o.estimate - tr)))
            for o, tr in zip(outs, truths)
        ])
        cdf[name] = cdf_curve(errs)

    decisions = [
        {"trial": r.trial, "variant": name, **r.decisions[name]}
        for r in results
        for name in cfg.methods()
    ]
    return ReportBundle(
        config=cfg,
        convergence=convergence,
        mse_table=mse_rows,
        cdf=cdf,
        decisions=decisions,
        timing=timing,
        digests=[r.digest for r in results],
        scenario=base.with_emitter(_truth(cfg, 0, base)) if base is not None else None,
    )


def sweep_iterations(cfg: ExperimentConfig, variant_names=BEST_SEVEN + ("PSO",), checkpoints=SWEEP_CHECKPOINTS) -> list:
    """RMS error of the global best at each checkpoint (the iteration-sweep table)."""
    T = cfg.pso.max_iterations
    bad = [t for t in checkpoints if not 1 <= t <= T]
    if bad:
        raise UsageError(f"checkpoints {bad} outside [1, {T}]")
    names = tuple(v.name for v in resolve_variants(list(variant_names)))
    return run_experiment(replace(cfg, variants=names, checkpoints=tuple(checkpoints))).mse_table


def cdf_config(cfg: ExperimentConfig, variants=("PSO", "MPSO11", TSE), iterations=None) -> ExperimentConfig:
    """``cfg`` restricted to ``variants``, with the per-method iteration budgets of the CDF comparison."""
    names = tuple(variants)
    budgets = {k: v for k, v in (CDF_ITERATIONS if iterations is None else iterations).items() if k in names}
    run_cfg = replace(cfg, variants=names, iterations=budgets)
    T_max = max((run_cfg.budget(m) for m in run_cfg.pso_methods()), default=1)
    checkpoints = tuple(t for t in cfg.checkpoints if t <= T_max) or (T_max,)
    return replace(run_cfg, checkpoints=checkpoints)


def compare_cdf(cfg: ExperimentConfig, variants=("PSO", "MPSO11", TSE), iterations=None) -> dict:
    """Error CDF ``(z, F)`` per method from paired trials.

    MPSO11 runs for 10 iterations and PSO for 150 unless ``iterations`` says otherwise.
    """
    return run_experiment(cdf_config(cfg, variants, iterations)).cdf


# ---------------------------------------------------------------------------
# plain-text key = value configuration

CONFIG_KEYS = {
    "n_sus": int, "half_width": float, "pu_distance": float, "pu_bearing": float, "deploy_seed": int,
    "bandwidth_hz": float, "snr0_db": float, "antenna_height_m": float, "noise_enabled": "bool",
    "swarm_size": int, "max_iterations": int, "bound": float, "v_max": float,
    "variants": str, "trials": int, "emitter": str, "pu_threshold": float, "su_threshold": float,
    "seed": int, "redeploy_per_trial": "bool", "workers": int, "checkpoints": str, "rel_tol": float,
    "tse_max_iterations": int, "tse_step_tolerance": float, "tse_weighting": "bool", "out_dir": str,
}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def parse_value(key: str, raw):
    if key not in CONFIG_KEYS:
        raise ConfigError(key, "unknown configuration key")
    kind = CONFIG_KEYS[key]
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    try:
        if kind == "bool":
            if text.lower() in _TRUE:
                return True
            if text.lower() in _FALSE:
                return False
            raise ValueError(text)
        return kind(text)
    except ValueError:
        raise ConfigError(key, f"cannot parse {raw!r}") from None


def load_config_file(path) -> dict:
    """Read ``key = value`` lines (``#`` comments allowed) into a settings dict."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc.strerror}") from exc
    try:
        parser.read_string("[experiment]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(str(path), f"malformed config file ({exc.message.splitlines()[0]})") from None
    return {k: parse_value(k, v) for k, v in parser["experiment"].items()}


def parse_point(text, field_name="emitter"):
    if isinstance(text, str) and text.strip().lower() == "pu":
        return "pu"
    try:
        x, y = (float(v) for v in str(text).split(","))
    except ValueError:
        raise ConfigError(field_name, f"expected 'x,y' or 'pu', got {text!r}") from None
    return Point(x, y)


def build_config(settings: dict) -> ExperimentConfig:
    """Turn a flat settings dict (file keys and CLI overrides) into an :class:`ExperimentConfig`."""
    s = {k: parse_value(k, v) for k, v in settings.items() if v is not None}
    base = ExperimentConfig()
    deploy = replace(
        base.deploy,
        **{k: s[k] for k in ("n_sus", "half_width", "pu_distance", "pu_bearing") if k in s},
        **({"seed": s["deploy_seed"]} if "deploy_seed" in s else {}),
    )
    noise = replace(base.noise, **{k: s[k] for k in ("bandwidth_hz", "snr0_db", "antenna_height_m", "noise_enabled") if k in s})
    pso = replace(base.pso, **{k: s[k] for k in ("swarm_size", "max_iterations", "bound", "v_max") if k in s})
    tse = replace(base.tse, **{k[4:]: s[k] for k in ("tse_max_iterations", "tse_step_tolerance", "tse_weighting") if k in s})
    kw = {k: s[k] for k in ("trials", "pu_threshold", "su_threshold", "seed", "redeploy_per_trial", "workers", "rel_tol", "out_dir") if k in s}
    if "variants" in s:
        kw["variants"] = tuple(v.strip() for v in s["variants"].split(",") if v.strip())
    if "emitter" in s:
        kw["emitter"] = parse_point(s["emitter"])
    if "checkpoints" in s:
        try:
            kw["checkpoints"] = tuple(int(t) for t in s["checkpoints"].split(",") if t.strip())
        except ValueError:
            raise ConfigError("checkpoints", f"expected comma-separated integers, got {s['checkpoints']!r}") from None
    elif "max_iterations" in s:
        kw["checkpoints"] = tuple(t for t in SWEEP_CHECKPOINTS if t <= pso.max_iterations)
    return replace(base, deploy=deploy, noise=noise, pso=pso, tse=tse, **kw)

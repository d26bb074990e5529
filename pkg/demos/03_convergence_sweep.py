"""Error versus iteration and convergence speed for the strongest variants.

A reduced Monte Carlo run (100 trials) of standard PSO and the seven best
variants; the command-line `swarmloc sweep` runs the full 1000 trials.
"""

from swarmloc.harness import BEST_SEVEN, ExperimentConfig, run_experiment

cfg = ExperimentConfig(variants=("PSO",) + BEST_SEVEN, trials=100, checkpoints=(1, 5, 10, 25, 50, 100, 150))
bundle = run_experiment(cfg)

names = cfg.methods()
print("rms error (m) of the global best")
print("t     " + "".join(f"{n:>9s}" for n in names))
for t in cfg.checkpoints:
    row = {r["variant"]: r["rms"] for r in bundle.mse_table if r["t"] == t}
    print(f"{t:<5d} " + "".join(f"{row[n]:9.1f}" for n in names))

print("\nmean convergence iteration (within 5% of final fitness)")
for r in sorted(bundle.convergence, key=lambda r: r["mean_convergence_iteration"]):
    print(f"  {r['variant']:7s} {r['mean_convergence_iteration']:6.1f}")

"""Error CDFs of a 10-iteration MPSO11, a 150-iteration PSO and the TSE baseline.

Every trial feeds the three methods the same measurements (10 SUs).
"""

from swarmloc.harness import TSE, ExperimentConfig, compare_cdf
from swarmloc.metrics import cdf_quantile
from swarmloc.scenario import DeployConfig

cfg = ExperimentConfig(deploy=DeployConfig(n_sus=10), trials=300)
cdf = compare_cdf(cfg, ("MPSO11", "PSO", TSE))

print("method   median   90th pct   F(50 m)  F(100 m)")
for name, (z, F) in cdf.items():
    below = lambda r: float((z <= r).mean())
    print(f"{name:7s} {cdf_quantile(z, F, 0.5):7.1f}  {cdf_quantile(z, F, 0.9):9.1f}  {below(50):7.2f}  {below(100):7.2f}")

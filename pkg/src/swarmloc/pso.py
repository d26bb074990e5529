"""Particle swarm engine with pluggable inertia and acceleration schedules.

Each particle owns a random stream keyed by ``(seed, trial, particle_id)``,
so reordering particles never changes what any one of them draws.  The
swarm-level stream used by the random inertia schedules is keyed by
``(seed, trial)`` alone.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, UsageError
from .schedules import CHAOTIC, ChaosState, VariantSpec, accel_coeffs, get_variant, inertia_weight

DIM = 2


@dataclass(frozen=True)
class PsoConfig:
    variant: VariantSpec | str = "PSO"
    swarm_size: int = 40
    max_iterations: int = 150
    bound: float = 110_000.0
    v_max: float | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "variant", get_variant(self.variant))
        if self.v_max is None:
            object.__setattr__(self, "v_max", 0.2 * 2.0 * self.bound)
        if self.swarm_size < 2:
            raise ConfigError("swarm_size", f"must be >= 2, got {self.swarm_size}")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations", f"must be >= 1, got {self.max_iterations}")
        if not self.bound > 0:
            raise ConfigError("bound", f"must be positive, got {self.bound}")
        if not self.v_max > 0:
            raise ConfigError("v_max", f"must be positive, got {self.v_max}")


def particle_stream(seed: int, trial: int, particle_id: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial, 0, particle_id))))


def swarm_stream(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial, 1))))


@dataclass
class Swarm:
    positions: np.ndarray
    velocities: np.ndarray
    pbest: np.ndarray
    pbest_fitness: np.ndarray
    gbest: np.ndarray
    gbest_fitness: float
    # r1, r2 for every iteration: shape (T, K, 2, DIM), pre-drawn per particle stream
    coefficients: np.ndarray
    chaos: ChaosState
    rng: np.random.Generator
    particle_ids: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int))

    @property
    def size(self) -> int:
        return self.positions.shape[0]


def init_swarm(cfg: PsoConfig, obj, trial: int = 0, particle_ids=None) -> Swarm:
    """Uniform positions over the search square, zero velocity, pbest = start."""
    K, T, b = cfg.swarm_size, cfg.max_iterations, cfg.bound
    ids = np.arange(K) if particle_ids is None else np.asarray(particle_ids, dtype=int)
    if ids.shape != (K,):
        raise ConfigError("particle_ids", f"need {K} ids, got shape {ids.shape}")

    positions = np.empty((K, DIM))
    coefficients = np.empty((T, K, 2, DIM))
    for k, pid in enumerate(ids):
        g = particle_stream(cfg.seed, trial, int(pid))
        positions[k] = g.uniform(-b, b, DIM)
        coefficients[:, k] = g.random((T, 2, DIM))

    fit = np.asarray(obj(positions), dtype=float)
    best = int(np.argmin(fit))
    schedule = cfg.variant.inertia_schedule()
    chaos = ChaosState(schedule.params.get("c0", 0.3)) if schedule.label in CHAOTIC else ChaosState()
    return Swarm(
        positions=positions,
        velocities=np.zeros((K, DIM)),
        pbest=positions.copy(),
        pbest_fitness=fit.copy(),
        gbest=positions[best].copy(),
        gbest_fitness=float(fit[best]),
        coefficients=coefficients,
        chaos=chaos,
        rng=swarm_stream(cfg.seed, trial),
        particle_ids=ids,
    )


def velocity_update(v, x, pbest, gbest, w, c1, c2, r1, r2):
    """``w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)``, elementwise."""
    return w * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x)


def step(swarm: Swarm, t: int, cfg: PsoConfig, obj) -> Swarm:
    """Advance the swarm by one iteration in place and return it."""
    T = cfg.max_iterations
    w = inertia_weight(cfg.variant.inertia_schedule(), t, T, swarm.chaos, swarm.rng)
    c1, c2 = accel_coeffs(cfg.variant.accel, t, T)
    r = swarm.coefficients[t]

    x = swarm.positions
    v = velocity_update(swarm.velocities, x, swarm.pbest, swarm.gbest, w, c1, c2, r[:, 0], r[:, 1])
    np.clip(v, -cfg.v_max, cfg.v_max, out=v)
    x = np.clip(x + v, -cfg.bound, cfg.bound)

    fit = np.asarray(obj(x), dtype=float)
    improved = fit < swarm.pbest_fitness
    swarm.pbest[improved] = x[improved]
    swarm.pbest_fitness[improved] = fit[improved]
    best = int(np.argmin(swarm.pbest_fitness))
    if swarm.pbest_fitness[best] < swarm.gbest_fitness:
        swarm.gbest = swarm.pbest[best].copy()
        swarm.gbest_fitness = float(swarm.pbest_fitness[best])

    swarm.positions = x
    swarm.velocities = v
    return swarm


@dataclass
class RunTrace:
    """Global best after initialization (row 0) and after each of the T steps."""

    variant: str
    fitness: np.ndarray
    positions: np.ndarray
    duration_s: float = 0.0

    @property
    def estimate(self) -> np.ndarray:
        return self.positions[-1]

    @property
    def final_fitness(self) -> float:
        return float(self.fitness[-1])

    def __len__(self):
        return self.fitness.size

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("t", "gbest_fitness", "x", "y"))
            for t, (f, (x, y)) in enumerate(zip(self.fitness, self.positions)):
                w.writerow((t, repr(float(f)), repr(float(x)), repr(float(y))))


def run(cfg: PsoConfig, obj, trial: int = 0, particle_ids=None) -> RunTrace:
    """Initialize, take ``cfg.max_iterations`` steps, and record the global best each time."""
    start = time.perf_counter()
    T = cfg.max_iterations
    swarm = init_swarm(cfg, obj, trial=trial, particle_ids=particle_ids)
    fitness = np.empty(T + 1)
    positions = np.empty((T + 1, DIM))
    fitness[0] = swarm.gbest_fitness
    positions[0] = swarm.gbest
    for t in range(T):
        step(swarm, t, cfg, obj)
        fitness[t + 1] = swarm.gbest_fitness
        positions[t + 1] = swarm.gbest
    return RunTrace(cfg.variant.name, fitness, positions, time.perf_counter() - start)


def convergence_iteration(trace, rel_tol: float = 0.05, floor: float = 1e-6) -> int:
    """First iteration whose best fitness is within ``rel_tol`` of the final one.

    ``trace`` may be a :class:`RunTrace` or a plain fitness sequence.  When the
    final fitness is exactly zero the absolute ``floor`` is used instead.
    """
    f = np.asarray(trace.fitness if isinstance(trace, RunTrace) else trace, dtype=float)
    if f.size == 0:
        raise UsageError("empty trace")
    if not rel_tol > 0:
        raise UsageError("rel_tol must be positive")
    final = f[-1]
    target = (1.0 + rel_tol) * final if final > 0 else floor
    return int(np.argmax(f <= target))

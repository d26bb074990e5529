import numpy as np
import pytest

from conftest import make_objective
from swarmloc.errors import ConfigError, UsageError
from swarmloc.pso import PsoConfig, convergence_iteration, init_swarm, run, step, velocity_update


class Sphere:
    """Quadratic bowl centred on ``c``; same calling convention as the objective."""

    def __init__(self, c):
        self.c = np.asarray(c, dtype=float)

    def __call__(self, p):
        d = np.asarray(p, dtype=float) - self.c
        out = np.sum(d * d, axis=-1)
        return float(out) if np.ndim(out) == 0 else out


def test_init_inside_bounds():
    cfg = PsoConfig(swarm_size=200, seed=3)
    sw = init_swarm(cfg, Sphere((0, 0)))
    assert np.all(np.abs(sw.positions) <= cfg.bound)
    assert np.all(sw.velocities == 0)
    assert sw.gbest_fitness == sw.pbest_fitness.min()


def test_determinism(scenario10):
    obj = make_objective(scenario10)
    cfg = PsoConfig(variant="MPSO12", max_iterations=40, seed=11)
    a, b = run(cfg, obj, trial=2), run(cfg, obj, trial=2)
    np.testing.assert_array_equal(a.fitness, b.fitness)
    np.testing.assert_array_equal(a.positions, b.positions)
    c = run(cfg, obj, trial=3)
    assert not np.array_equal(a.positions, c.positions)


def test_fixed_point():
    cfg = PsoConfig(swarm_size=5, max_iterations=3)
    obj = Sphere((100.0, -50.0))
    sw = init_swarm(cfg, obj)
    sw.positions[:] = obj.c
    sw.pbest[:] = obj.c
    sw.pbest_fitness[:] = 0.0
    sw.gbest = obj.c.copy()
    sw.gbest_fitness = 0.0
    for t in range(3):
        step(sw, t, cfg, obj)
    np.testing.assert_array_equal(sw.positions, np.tile(obj.c, (5, 1)))
    assert np.all(sw.velocities == 0)


def test_velocity_algebra():
    v = velocity_update(
        np.array([1.0, -2.0]), np.array([0.0, 0.0]), np.array([3.0, 4.0]), np.array([-1.0, 1.0]),
        w=0.5, c1=2.0, c2=1.5, r1=np.array([0.25, 0.5]), r2=np.array([1.0, 0.2]),
    )
    np.testing.assert_allclose(v, [0.5 + 1.5 - 1.5, -1.0 + 4.0 + 0.3])


@pytest.mark.parametrize("variant", ["PSO", "PSO2", "MPSO7", "IPSO12", "MPSO11"])
def test_invariants(scenario10, variant):
    obj = make_objective(scenario10)
    cfg = PsoConfig(variant=variant, max_iterations=60, seed=5)
    sw = init_swarm(cfg, obj)
    prev = sw.gbest_fitness
    prev_pbest = sw.pbest_fitness.copy()
    for t in range(cfg.max_iterations):
        step(sw, t, cfg, obj)
        assert sw.gbest_fitness <= prev
        assert np.all(sw.pbest_fitness <= prev_pbest)
        assert np.all(np.abs(sw.positions) <= cfg.bound)
        assert np.all(np.abs(sw.velocities) <= cfg.v_max)
        assert obj(sw.gbest) == pytest.approx(sw.gbest_fitness, rel=1e-12)
        prev, prev_pbest = sw.gbest_fitness, sw.pbest_fitness.copy()


def test_particle_order_irrelevant(scenario10):
    obj = make_objective(scenario10)
    cfg = PsoConfig(variant="PSO10", max_iterations=30, swarm_size=12, seed=9)
    ids = np.arange(12)
    a = run(cfg, obj, particle_ids=ids)
    b = run(cfg, obj, particle_ids=np.random.default_rng(0).permutation(ids))
    np.testing.assert_array_equal(a.estimate, b.estimate)
    np.testing.assert_array_equal(a.fitness, b.fitness)


def test_sphere_converges():
    trace = run(PsoConfig(variant="MPSO11", max_iterations=150), Sphere((1234.0, -4321.0)))
    assert np.hypot(*(trace.estimate - (1234.0, -4321.0))) < 1.0


def test_noise_free_localization(scenario100):
    obj = make_objective(scenario100, noise=False)
    trace = run(PsoConfig(variant="MPSO11", max_iterations=50), obj)
    assert np.hypot(*(trace.estimate - np.asarray(scenario100.emitter))) < 1.0


def test_more_iterations_help(scenario100):
    obj = make_objective(scenario100)
    truth = np.asarray(scenario100.emitter)
    short = run(PsoConfig(variant="MPSO11", max_iterations=10), obj)
    long = run(PsoConfig(variant="MPSO11", max_iterations=200), obj)
    assert np.hypot(*(long.estimate - truth)) < np.hypot(*(short.estimate - truth))


def test_trace_shape_and_csv(scenario10, tmp_path):
    trace = run(PsoConfig(max_iterations=7), make_objective(scenario10))
    assert len(trace) == 8 and trace.positions.shape == (8, 2)
    trace.to_csv(tmp_path / "t.csv")
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "t,gbest_fitness,x,y" and len(lines) == 9


def test_convergence_iteration():
    assert convergence_iteration([10.0, 5.0, 1.04, 1.0]) == 2
    assert convergence_iteration([10.0, 1.0, 1.0]) == 1
    assert convergence_iteration([3.0]) == 0
    assert convergence_iteration([5.0, 1e-7, 0.0]) == 1
    with pytest.raises(UsageError):
        convergence_iteration([])
    with pytest.raises(UsageError):
        convergence_iteration([1.0], rel_tol=0)


def test_bad_config():
    with pytest.raises(ConfigError) as e:
        PsoConfig(swarm_size=1)
    assert e.value.field == "swarm_size"
    with pytest.raises(ConfigError):
        PsoConfig(max_iterations=0)
    with pytest.raises(UsageError):
        PsoConfig(variant="NOPE")

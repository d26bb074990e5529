import numpy as np
import pytest

from swarmloc import DeployConfig, LocalizationObjective, NoiseModel, deploy_network, synthesize

ATTACKER = (8000.0, 1000.0)

# filled by test_acceptance.py, printed after the run
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}")


@pytest.fixture(scope="session")
def scenario100():
    return deploy_network(DeployConfig(n_sus=100, seed=0)).with_emitter(ATTACKER)


@pytest.fixture(scope="session")
def scenario10():
    return deploy_network(DeployConfig(n_sus=10, seed=0)).with_emitter(ATTACKER)


def make_objective(scenario, noise=True, seed=0, weighted=False):
    m = synthesize(scenario, NoiseModel(noise_enabled=noise), np.random.default_rng(seed))
    return LocalizationObjective.from_scenario(scenario, m, weighted=weighted)

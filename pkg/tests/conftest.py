"""Session-cached benchmark sweeps and the per-criterion acceptance summary."""

import math
import time
from dataclasses import dataclass

import pytest

from defcon.continuation import ContinuationConfig, run
from defcon.problems import Elastica, Mittelmann, Pendulum, RootsOfUnity


@dataclass
class Sweep:
    problem: object
    config: ContinuationConfig
    diagram: object
    seconds: float
    records: list

    def __repr__(self):
        return f"Sweep({self.problem.name}, {len(self.diagram.branches)} branches, {self.seconds:.1f} s)"


def timed_run(problem, cfg):
    records = []
    start = time.perf_counter()
    diagram = run(problem, cfg, records.append)
    return Sweep(problem, cfg, diagram, time.perf_counter() - start, records)


@pytest.fixture(scope="session")
def unity_sweep():
    return timed_run(RootsOfUnity(), ContinuationConfig(2.0, 9.0, 0.1, retain="all"))


@pytest.fixture(scope="session")
def elastica_sweep():
    return timed_run(Elastica(0.0), ContinuationConfig(0.0, 4 * math.pi, 0.1, retain="all"))


@pytest.fixture(scope="session")
def elastica_half_sweep():
    cfg = ContinuationConfig(0.0, 4 * math.pi, 0.1, retain="all", backward_pass=True)
    return timed_run(Elastica(0.5), cfg)


@pytest.fixture(scope="session")
def pendulum_sweep():
    return timed_run(Pendulum(), ContinuationConfig(0.0, 1.0, 0.01, retain="all"))


@pytest.fixture(scope="session")
def mittelmann_sweep():
    return timed_run(Mittelmann(), ContinuationConfig(0.3678, 0.05, -0.001, retain="all"))


# -- acceptance summary ----------------------------------------------------------

def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config._criterion_of = {}
    config._criterion_results = {}


def pytest_collection_modifyitems(config, items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            config._criterion_of[item.nodeid] = marker.args[0]


def pytest_runtest_logreport(report):
    config = pytest_runtest_logreport.config
    n = config._criterion_of.get(report.nodeid)
    if n is None or (report.when != "call" and report.passed):
        return
    results = config._criterion_results.setdefault(n, [])
    results.append((report.nodeid.split("::")[-1], report.passed))


def pytest_sessionstart(session):
    pytest_runtest_logreport.config = session.config


def pytest_terminal_summary(terminalreporter, config):
    results = config._criterion_results
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        failed = [name for name, ok in results[n] if not ok]
        if failed:
            terminalreporter.write_line(f"criterion {n}: FAIL ({', '.join(failed)})")
        else:
            terminalreporter.write_line(f"criterion {n}: PASS")

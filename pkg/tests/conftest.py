import numpy as np
import pytest

from malevich import bounds
from malevich.numerics import random_density


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def bound():
    """Cached ``reproduce_bound`` so several test modules can share one multi-start run."""
    cache = {}

    def get(problem, sense="max", seed=42):
        key = (problem, sense, seed)
        if key not in cache:
            cache[key] = bounds.reproduce_bound(problem, seed=seed, sense=sense)
        return cache[key]

    return get


def random_quantum_triples(rng, n):
    """Uniform points in the quantum ball of probability triples."""
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    r = rng.uniform(size=(n, 1)) ** (1 / 3)
    return 0.5 + 0.5 * r * v


def random_qutrits(rng, n, rank=None):
    return random_density(3, rng, size=n, rank=rank)


# --- acceptance criteria summary ------------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None and (report.when == "call" or report.outcome != "passed"):
        number, title = mark.args
        previous = _CRITERIA.get(number, (None, "PASS"))[1]
        verdict = "PASS" if report.outcome == "passed" and previous == "PASS" else "FAIL"
        if report.outcome == "skipped":
            verdict = "SKIP"
        _CRITERIA[number] = (title, verdict)
    return report


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, verdict = _CRITERIA[number]
        terminalreporter.write_line(f"{verdict} criterion {number:2d}: {title}")

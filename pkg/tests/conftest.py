import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def unit_roots(rng, L):
    return np.exp(2j * np.pi * rng.uniform(size=L))


@pytest.fixture(scope="session")
def example1_result(tmp_path_factory):
    from idealsdp.experiments import run_example1

    return run_example1(write=False)


@pytest.fixture(scope="session")
def example2_result():
    from idealsdp.experiments import run_example2

    return run_example2(write=False)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Record one acceptance verdict line; returns the verdict."""

    def _record(criterion: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hardkit.data import Dataset  # noqa: E402

_ACCEPTANCE: list[tuple[str, str]] = []


def random_dataset(rng: np.random.Generator, n_range=(12, 60), m_range=(1, 8), min_class: int = 2,
                   discrete: bool = False) -> Dataset:
    """Random two-class dataset; ``discrete`` draws small integers to provoke ties."""
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    n1 = int(rng.integers(min_class, n - min_class + 1))
    y = np.r_[np.zeros(n - n1), np.ones(n1)].astype(np.int64)
    rng.shuffle(y)
    if discrete:
        X = rng.integers(0, 4, (n, m)).astype(float)
    else:
        X = rng.normal(0, 1, (n, m)) + y[:, None] * rng.uniform(0, 3)
    return Dataset(X, y)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _ACCEPTANCE.append((name, status))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _ACCEPTANCE:
        terminalreporter.write_line(f"{status}  {name}")

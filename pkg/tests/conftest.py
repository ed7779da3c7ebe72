import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lisamatch.core import AffinityMatrix  # noqa: E402

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def random_symmetric(rng: np.random.Generator, n: int, low: float = 0.0, high: float = 1.0,
                     diag: bool = True) -> np.ndarray:
    x = rng.uniform(low, high, (n, n))
    x = np.triu(x) + np.triu(x, 1).T
    if not diag:
        np.fill_diagonal(x, 0.0)
    return x


def dense(x) -> AffinityMatrix:
    return AffinityMatrix.from_dense(np.asarray(x, dtype=float))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

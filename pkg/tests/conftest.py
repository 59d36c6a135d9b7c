import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def toys():
    from fuzzyrand import toy_allocations

    return toy_allocations()


def make_fuzzy(rows) -> "np.ndarray":
    """Normalize a nonnegative array into simplex rows."""
    arr = np.asarray(rows, dtype=np.float64)
    return arr / arr.sum(axis=1, keepdims=True)


def one_hot(labels, n_clusters=None):
    labels = np.asarray(labels)
    n = int(labels.max()) + 1 if n_clusters is None else n_clusters
    out = np.zeros((labels.size, n))
    out[np.arange(labels.size), labels] = 1.0
    return out


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    results = getattr(mod, "CRITERION_RESULTS", {})
    labels = getattr(mod, "CRITERION_LABELS", {})
    if not labels:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(labels):
        label = labels[num]
        if num in results:
            ok, detail = results[num]
            status = "PASS" if ok else "FAIL"
            line = f"criterion {num} [{status}] {label}"
            if detail:
                line += f" - {detail}"
        else:
            line = f"criterion {num} [NOT RUN] {label}"
        terminalreporter.write_line(line)

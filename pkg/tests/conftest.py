from __future__ import annotations

import hypothesis.strategies as st
import pytest
from hypothesis import HealthCheck, settings

from rainbow import Instance

settings.register_profile(
    "default", max_examples=80, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def bipartite_instances(draw, max_n: int = 4, max_N: int = 6, max_extra: int = 2,
                        min_N: int = 1) -> Instance:
    n = draw(st.integers(1, max_n))
    N = draw(st.integers(min_N, max(min_N, max_N)))
    side_a = n + draw(st.integers(0, max_extra))
    side_b = n + draw(st.integers(0, max_extra))
    classes = []
    for _ in range(N):
        a = draw(st.permutations(range(side_a)))[:n]
        b = draw(st.permutations(range(side_b)))[:n]
        classes.append(sorted(zip(a, b)))
    return Instance.bipartite(n, side_a, side_b, classes)


@st.composite
def general_instances(draw, max_vertices: int = 7, max_N: int = 5) -> Instance:
    m = draw(st.integers(2, max_vertices))
    n = draw(st.integers(1, m // 2))
    N = draw(st.integers(1, max_N))
    classes = []
    for _ in range(N):
        order = draw(st.permutations(range(m)))
        classes.append([tuple(sorted(order[2 * i:2 * i + 2])) for i in range(n)])
    return Instance.general(n, m, classes)


_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_runtest_logreport(report: pytest.TestReport) -> None:
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome.upper()))


def pytest_terminal_summary(terminalreporter) -> None:
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"{outcome:8s} {name}")

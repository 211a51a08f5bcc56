import pytest
from hypothesis import strategies as st

from contragraph.concepts import ConceptClass


@st.composite
def concept_classes(draw, max_n=5, max_concepts=12):
    n = draw(st.integers(1, max_n))
    words = draw(st.sets(st.integers(0, (1 << n) - 1), min_size=1, max_size=min(max_concepts, 1 << n)))
    return ConceptClass(n, tuple(words))


@st.composite
def adjacency_rows(draw, min_order=1, max_order=12):
    n = draw(st.integers(min_order, max_order))
    rows = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if draw(st.booleans()):
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return rows


@pytest.fixture
def tmp_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


_acceptance_lines = []


def pytest_runtest_logreport(report):
    if report.when == "call":
        _acceptance_lines.extend(v for k, v in report.user_properties if k == "acceptance")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)

import random

import pytest

from localcolor import kernels
from localcolor.graph import Graph

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request, monkeypatch):
    """Run the test once per importable kernel backend."""
    mod = kernels.available_backends()[request.param]
    for name in ("bfs_ball", "core_order", "dsatur_search", "dsatur_greedy"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


def random_graph(rnd: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rnd.random() < p])


@pytest.fixture
def acceptance_record():
    def record(key: str, ok: bool, detail: str) -> None:
        ACCEPTANCE[key] = (ok, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0][2:])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")

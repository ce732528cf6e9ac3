import sys
from pathlib import Path

import pytest

from ncforms.algebra import builtin, catalog

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


@pytest.fixture(scope="session")
def problems_dir() -> Path:
    return PROBLEMS


@pytest.fixture(scope="session")
def dual():
    return builtin("dual_numbers")


@pytest.fixture(scope="session")
def qq():
    return builtin("product_QQ")


@pytest.fixture(scope="session")
def poly3():
    return builtin("truncated_poly", 3)


@pytest.fixture(scope="session")
def m2():
    return builtin("matrix", 2)


@pytest.fixture(scope="session")
def algebras():
    return catalog()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])

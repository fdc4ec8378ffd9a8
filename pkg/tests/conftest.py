import pytest

from liepoint import liealg
from liepoint.systemspec import load_spec, reference_tables

REFERENCE_ELEMENTS = {
    "X1": (1, 0, 0, 0), "X2": (0, 1, 0, 0), "X3": (0, 0, 1, 0), "X4": (0, 0, 0, 1),
    "X1+X2": (1, 1, 0, 0), "X2-X1": (-1, 1, 0, 0), "X2+X3": (0, 1, 1, 0),
    "X3-X2": (0, -1, 1, 0), "X3+X4": (0, 0, 1, 1), "X4-X3": (0, 0, -1, 1),
}


@pytest.fixture(scope="session")
def rnc_spec():
    return load_spec("rnc.json")


@pytest.fixture(scope="session")
def rnc(rnc_spec):
    return rnc_spec.system


@pytest.fixture(scope="session")
def basis(rnc_spec):
    return list(rnc_spec.expected)


@pytest.fixture(scope="session")
def alg(rnc_spec):
    return liealg.structure_constants(rnc_spec.expected, rnc_spec.labels)


@pytest.fixture(scope="session")
def heat_spec():
    return load_spec("heat.json")


@pytest.fixture(scope="session")
def ref_tables():
    return reference_tables()


ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

import pytest

from almosthopf import almost_group as ag


def catalog():
    """Every finite structure the suites exercise, by name."""
    out = {f"Z{n}": ag.cyclic(n) for n in range(1, 13)}
    out["S3"] = ag.symmetric_group(3)
    out["absorbing"] = ag.absorbing_triple()
    out["unital"] = ag.unital_triple()
    for name, A in (("Z2", ag.cyclic(2)), ("Z3", ag.cyclic(3)), ("Z4", ag.cyclic(4)),
                    ("Z2xZ2", ag.direct_product(ag.cyclic(2), ag.cyclic(2)))):
        out[f"pair({name})"] = ag.pair_construction(A)
    return out


CATALOG = catalog()


@pytest.fixture(scope="session")
def structures():
    return CATALOG


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

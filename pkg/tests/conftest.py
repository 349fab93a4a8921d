import pytest

from rollscore.curvature import compute_curvatures
from rollscore.mesh import RollerGenome, generate_two_circle_roller, matched_cylinder


@pytest.fixture(scope="session")
def oloid():
    return generate_two_circle_roller(RollerGenome.oloid())


@pytest.fixture(scope="session")
def cylinder(oloid):
    return matched_cylinder(oloid)


@pytest.fixture(scope="session")
def oloid_curvature(oloid):
    return compute_curvatures(oloid)


@pytest.fixture(scope="session")
def cylinder_curvature(cylinder):
    return compute_curvatures(cylinder)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion; printed in the terminal summary."""
    def report(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[-1])):
            terminalreporter.write_line(line)

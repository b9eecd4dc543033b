import pytest

import qmlab

FIXTURES_DIR = "fixtures"


@pytest.fixture(scope="session")
def tri3():
    return qmlab.make_fixture("tri3")


@pytest.fixture(scope="session")
def ow2():
    return qmlab.make_fixture("ow2")


@pytest.fixture(scope="session")
def ring10():
    return qmlab.make_one_way_ring(10)


@pytest.fixture(scope="session")
def gridworld6():
    return qmlab.make_gridworld(6, 6, [(0, 1), (7, 13), (20, 21)], (0.5, 0.0))


@pytest.fixture(scope="session")
def tri3_table(tri3):
    return qmlab.all_pairs_energy(tri3)


@pytest.fixture(scope="session")
def ow2_table(ow2):
    return qmlab.all_pairs_energy(ow2)

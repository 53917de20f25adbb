import pytest

from heartlab.bifurcations import scan
from heartlab.families import P0, P1, P2, Pq


@pytest.fixture(scope="session")
def p0_scan():
    return scan(P0, depth=30)


@pytest.fixture(scope="session")
def p1_scan():
    return scan(P1, depth=30)


@pytest.fixture(scope="session")
def pq_scan():
    return scan(Pq, depth=30)


@pytest.fixture(scope="session")
def p2_scan():
    return scan(P2, depth=30)

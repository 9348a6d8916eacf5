import pytest

from taylorlets import build_taylorlet


@pytest.fixture(scope="session")
def spec22():
    """Order-2 taylorlet with 3 vanishing moments (the worked example)."""
    return build_taylorlet(2, 2)


@pytest.fixture(scope="session")
def spec11():
    return build_taylorlet(1, 1)

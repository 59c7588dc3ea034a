import pytest

from reclab import hazard


@pytest.fixture(scope="session")
def expo():
    return hazard.exponential(1.0)


@pytest.fixture(scope="session")
def whalf():
    return hazard.weibull(0.5, 1.0)


@pytest.fixture(scope="session")
def wtwo():
    return hazard.weibull(2.0, 1.0)


FAMILIES = [hazard.exponential(1.0), hazard.exponential(2.0, 1.0), hazard.weibull(0.5, 1.0),
            hazard.weibull(2.0, 1.5), hazard.linear_quadratic()]

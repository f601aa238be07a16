import pytest

from characters import AddCharTwist, GenuineCharData, MultChar
from tame_field import make_context


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="slow; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def ctx_7_3():
    """Odd cover, n = d = 3 over Q_7."""
    return make_context(7, 1, 3)


@pytest.fixture(scope="session")
def ctx_7_1():
    """SL2 itself over Q_7."""
    return make_context(7, 1, 1)


@pytest.fixture(scope="session")
def ctx_5_2():
    """Double cover over Q_5."""
    return make_context(5, 1, 2)


@pytest.fixture(scope="session")
def ctx_3_2_2():
    """Double cover over the unramified quadratic extension of Q_3."""
    return make_context(3, 2, 2)


@pytest.fixture(scope="session")
def ctx_7_6():
    """Even cover, n = 6, d = 3 over Q_7."""
    return make_context(7, 1, 6)


@pytest.fixture(scope="session")
def deep_5_2():
    """Q_5 with 25th roots of unity, for the Schwartz and shell oracles."""
    return make_context(5, 1, 2, depth=2)


@pytest.fixture(scope="session")
def deep_3_1():
    """Q_3 with 9th roots of unity and the linear cover."""
    return make_context(3, 1, 1, depth=2)


@pytest.fixture
def genuine():
    """Factory for genuine data with chi = (unit_exp, varpi_exp) and the normalized psi."""

    def build(ctx, unit_exp=0, varpi_exp=0):
        return GenuineCharData(ctx, MultChar.make(ctx, unit_exp, varpi_exp), AddCharTwist.normalized(ctx))

    return build

import pytest

from normfam.forge import construct


@pytest.fixture(scope="session")
def family():
    """Constructed members for orders 1..6, shared across the suite."""
    return {n: construct(n) for n in range(1, 7)}

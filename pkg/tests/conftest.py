import pytest

from dewijs import lattice


@pytest.fixture(scope="session")
def potential_table():
    """Shared dense potential-kernel table, max lag 16."""
    return lattice.potential_kernel(16)

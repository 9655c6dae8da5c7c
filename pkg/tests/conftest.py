import pytest
from hypothesis import settings

# numba warm-up on first call can blow the default deadline; derandomize
# keeps CI runs repeatable
settings.register_profile("egyfrac", deadline=None, derandomize=True)
settings.load_profile("egyfrac")


@pytest.fixture(scope="session")
def records_8k():
    """Full-oracle sweep to 2^13, shared by the growth/acceptance tests."""
    from egyfrac import aggregate

    return aggregate.build_records(1 << 13)

import pytest
from hypothesis import HealthCheck, settings

from cellforge.catalog import catalog
from cellforge.closed_forms import construct_cells, legal_variants

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SYSTEM_KEYS = [(s.family, s.n, v) for s in catalog() for v in legal_variants(s.family, s.n)]


def key_id(key):
    fam, n, v = key
    return f"{fam}:{n}:{v}"


@pytest.fixture(scope="session")
def system_cache():
    cache = {}

    def get(fam, n=None, variant=None):
        k = (fam, n, variant)
        if k not in cache:
            cache[k] = construct_cells(fam, n, variant)
        return cache[k]

    return get

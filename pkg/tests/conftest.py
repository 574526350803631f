import pytest
from hypothesis import HealthCheck, settings

from qhs import geometry as G
from qhs.connection import levi_civita
from qhs.preset import default_data, load_preset

settings.register_profile(
    "exact", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("exact")


@pytest.fixture(scope="session")
def preset():
    return load_preset("podles-cp1")


@pytest.fixture(scope="session")
def preset_data():
    return default_data("podles-cp1")


@pytest.fixture(scope="session")
def base(preset):
    return G.base_metrics(preset)


@pytest.fixture(scope="session")
def lam(preset, base):
    return G.qsym_lambda(preset, *base)


@pytest.fixture(scope="session")
def qsym_metric(preset, base, lam):
    return G.metric_family(*base, 1, -lam, preset)


@pytest.fixture(scope="session")
def lc(preset, qsym_metric):
    return levi_civita(preset, qsym_metric)

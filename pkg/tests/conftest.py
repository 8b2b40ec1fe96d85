import pytest
from hypothesis import HealthCheck, settings

from twistkit import linalg as la

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")

QQ = la.field_from_spec("QQ")
GF5 = la.field_from_spec({"prime": 5})
GF2 = la.field_from_spec({"prime": 2})
FIELDS = [QQ, GF5]


@pytest.fixture(params=["QQ", "GF5"])
def K(request):
    return QQ if request.param == "QQ" else GF5


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose the call-phase outcome to fixtures (used by the acceptance report)
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep

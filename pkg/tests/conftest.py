import pytest

from eiscong.eisenstein import EisensteinSeries
from eiscong.quadfield import make_field
from eiscong.rayclass import named_character


@pytest.fixture(autouse=True)
def _cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("EISCONG_CACHE_DIR", str(tmp_path / "cache"))


@pytest.fixture(scope="session")
def F2():
    return make_field(2)


@pytest.fixture(scope="session")
def F5():
    return make_field(5)


@pytest.fixture(scope="session")
def chi5(F2):
    return named_character(F2, "chi5")


@pytest.fixture(scope="session")
def triv2(F2):
    return named_character(F2, "triv")


@pytest.fixture(scope="session")
def E(chi5, triv2):
    """E_2(chi5, 1) over Q(sqrt 2), level (5)."""
    return EisensteinSeries(chi5, triv2, 2)


@pytest.fixture(scope="session")
def E_dual(chi5, triv2):
    return EisensteinSeries(triv2, chi5, 2)


def build_family(F, bound: int, k: int = 2, limit: int | None = None):
    """Every E_k(phi, psi) with conductor norms <= bound satisfying the standing hypotheses."""
    from eiscong.errors import ParityMismatch, PreconditionError
    from eiscong.rayclass import all_primitive_characters

    chars = all_primitive_characters(F, bound)
    out = []
    for phi in chars:
        for psi in chars:
            if int(phi.modulus.norm()) * int(psi.modulus.norm()) > bound * 4:
                continue
            if phi.is_trivial() and psi.is_trivial():
                continue
            try:
                out.append(EisensteinSeries(phi, psi, k))
            except (ParityMismatch, PreconditionError):
                continue
            if limit and len(out) >= limit:
                return out
    return out


@pytest.fixture(scope="session")
def family2(F2):
    return build_family(F2, 50)


# -- acceptance criterion 9 bookkeeping ------------------------------------------
# Property tests carry the "property" marker.  When they run in the same
# session as the acceptance file, criterion 9 reads their outcomes instead
# of running them a second time.

PROPERTY_OUTCOMES: dict[str, str] = {}
ACCEPT9 = "test_acceptance.py::test_criterion_9_property_suites"


def pytest_collection_modifyitems(config, items):
    last = [i for i in items if i.nodeid.endswith(ACCEPT9)]
    items[:] = [i for i in items if i not in last] + last
    config.property_nodeids = {i.nodeid for i in items if i.get_closest_marker("property")}


def pytest_runtest_logreport(report):
    if report.when == "call" or report.outcome != "passed":
        prev = PROPERTY_OUTCOMES.get(report.nodeid)
        if prev is None or prev == "passed":
            PROPERTY_OUTCOMES[report.nodeid] = report.outcome

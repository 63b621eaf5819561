import io

import pytest

from geo4.__main__ import main
from geo4.catalog import Catalog
from geo4.config import build_session, load_profile
from geo4.geography import Realizer


@pytest.fixture(params=[1, 2])
def cores(request):
    return request.param


@pytest.fixture
def catalog():
    return Catalog.default()


@pytest.fixture(scope="session")
def desk_session():
    return build_session(load_profile("desk"))


@pytest.fixture
def desk_realizer(desk_session):
    return desk_session.realizer


@pytest.fixture
def base_realizer(catalog):
    return Realizer(catalog)


@pytest.fixture
def run(monkeypatch):
    """Run the command line; return exit status and standard output"""
    monkeypatch.delenv("GEO4_PROFILE", raising=False)

    def _run(params):
        if type(params) is str:
            params = params.split()
        out = io.StringIO()
        status = main([str(p) for p in params], stdout=out)
        return status, out.getvalue()

    return _run

import pytest
from hypothesis import settings

from sicverify import algebras, matgroups, sic

settings.register_profile("repo", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def hesse():
    return sic.hesse_system()


@pytest.fixture(scope="session")
def hoggar():
    return sic.hoggar_system()


@pytest.fixture(scope="session")
def hesse_sym():
    return sic.hesse_symmetries()


@pytest.fixture(scope="session")
def hoggar_stab():
    return sic.cached_hoggar_stabilizer()


@pytest.fixture(scope="session")
def psu_parts():
    return matgroups.build_psu33_parts()


@pytest.fixture(scope="session")
def sl23():
    return matgroups.build_sl23()


@pytest.fixture(scope="session")
def units():
    return algebras.cayley_units()


@pytest.fixture(scope="session")
def g2z():
    return algebras.cayley_automorphisms()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, name, ok, detail in sorted(RESULTS):
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail}")

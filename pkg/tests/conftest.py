import pytest

from scriptometrics.frequency import FrequencyTable, histogram
from scriptometrics.model import component_count, connection_count
from scriptometrics.notation import load_vai

# Published frequency tables, transcribed by hand.
TABLE2 = FrequencyTable(
    4,
    (2, 1, 7, 3, 7, 4, 4, 5, 7, 8, 12, 6, 9, 7, 12, 8, 12, 5, 10, 7, 13, 8, 13,
     9, 10, 2, 6, 1, 4, 3, 5, 3, 5, 1, 3, 1, 0, 0, 1, 2, 0, 1, 1, 0, 1),
)
TABLE3_COMPONENTS = FrequencyTable(2, (7, 22, 41, 49, 48, 35, 17, 8, 2))
TABLE3_CONNECTIONS = FrequencyTable(0, (17, 9, 30, 24, 33, 33, 34, 16, 10, 10, 5, 3, 4, 0, 1))

TOY_TSV = (
    "id\ttranslit\tcomponents\tconnections\tcomplexity\n"
    "1\ta\t4×1+1×2+2×3\t2×1+1×2\t16\n"
    "2\tbɔ\t3×2+1×3+1×2*\t4×2\t19\n"
    "3\tdʒo\t2×1+1×2\t—\t4\n"
)


@pytest.fixture(scope="session")
def vai():
    return load_vai()


@pytest.fixture(scope="session")
def components_table(vai):
    return histogram(component_count(g) for g in vai)


@pytest.fixture(scope="session")
def connections_table(vai):
    return histogram(connection_count(g) for g in vai)


@pytest.fixture
def toy_path(tmp_path):
    path = tmp_path / "toy.tsv"
    path.write_text(TOY_TSV, encoding="utf-8")
    return path


SUITE_LIMIT_S = 30.0
_session_start = {}


def pytest_sessionstart(session):
    import time

    _session_start["t"] = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    import time

    elapsed = time.perf_counter() - _session_start.get("t", time.perf_counter())
    ok = elapsed < SUITE_LIMIT_S
    print(f"\nACCEPTANCE [{'PASS' if ok else 'FAIL'}] 8b. Total suite runtime: {elapsed:.2f} s (limit {SUITE_LIMIT_S:.0f} s)")
    if not ok:
        session.exitstatus = 1

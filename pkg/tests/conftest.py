import re
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from parahyper.catalog import PARAMETERS, PHC_IDS, phc

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# one sample per family; shared by several test modules
SAMPLE = {"a": Fraction(1), "b": Fraction(0), "c": Fraction(1)}


def sample_params(cid):
    return {k: v for k, v in SAMPLE.items() if k in PARAMETERS.get(cid, ())}


@pytest.fixture(scope="session")
def catalog_samples():
    return {cid: phc(cid, sample_params(cid)) for cid in PHC_IDS}


# ---------------------------------------------------------------- acceptance summary

CRITERIA = {
    1: "catalog verification",
    2: "J3 integrability",
    3: "hyperboloid composition identity",
    4: "metric suite",
    5: "null-vector basis criterion",
    6: "plane and null-cone geometry",
    7: "search recovery",
    8: "negative control (evidence, not proof)",
    9: "classifier",
    10: "frontend",
}
_results: dict[int, list[bool]] = {}
_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results.setdefault(int(m.group(1)), []).append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        if k not in _results:
            continue
        status = "PASS" if all(_results[k]) else "FAIL"
        terminalreporter.write_line(f"criterion {k:2d} {CRITERIA[k]}: {status}")

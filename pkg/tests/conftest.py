import os
from importlib import resources

import pytest
from hypothesis import HealthCheck, settings

from sullivan.workspace import parse

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def zoo_text():
    return (resources.files("sullivan") / "zoo" / "zoo.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def zoo():
    return parse(zoo_text())


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines(mod.RESULTS):
        terminalreporter.write_line(line)

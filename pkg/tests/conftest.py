import sys

import pytest
from hypothesis import HealthCheck, settings

from families import EXAMPLES, example

settings.register_profile("default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(params=sorted(EXAMPLES))
def example_name(request):
    return request.param


@pytest.fixture
def example_rule(example_name):
    return example(example_name)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])

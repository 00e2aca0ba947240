import math
import os

import pytest
from hypothesis import HealthCheck, settings

from revperim import ConvexPolygon, TrigRadial, UnitDisk

settings.register_profile(
    "default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=30, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CONTAINER_DIR = os.path.join(ROOT, "containers")

# one PASS/FAIL line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE: dict = {}


def offset_trig():
    return TrigRadial(1.0, (0.45,), (0.0, 0.04))


def oval_trig():
    return TrigRadial(1.0, (0.0, 0.1), ())


def square():
    return ConvexPolygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])


@pytest.fixture(params=["disk", "offset_trig", "oval_trig", "square"])
def any_container(request):
    return {"disk": UnitDisk, "offset_trig": offset_trig, "oval_trig": oval_trig, "square": square}[request.param]()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, label, detail = ACCEPTANCE[key]
        terminalreporter.write_line("criterion %2d: %s  %s  (%s)" % (key, "PASS" if ok else "FAIL", label, detail))


def regular_area(m):
    return 0.5 * m * math.sin(2.0 * math.pi / m)

import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from reconcile.grounding import parse_plan
from reconcile.pddl import load_model
from reconcile.perturb import fixture_root, load_problems

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.register_profile("ci", max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = fixture_root()
DATA = Path(__file__).parent / "data"
FETCH = FIXTURES / "fetch"


def fetch_paths(human="human-domain.pddl"):
    return dict(robot_domain=FETCH / "robot-domain.pddl", problem=FETCH / "problem.pddl",
                human_domain=FETCH / human, plan=FETCH / "plan.txt")


@pytest.fixture(scope="session")
def fetch():
    p = fetch_paths()
    robot = load_model(p["robot_domain"], p["problem"])
    human = load_model(p["human_domain"], p["problem"])
    plan = parse_plan(p["plan"].read_text())
    return robot, human, plan


@pytest.fixture(scope="session")
def fetch_human2():
    p = fetch_paths("human2-domain.pddl")
    return load_model(p["human_domain"], p["problem"])


@pytest.fixture(scope="session")
def problems():
    return load_problems(FIXTURES)


@pytest.fixture(scope="session")
def bench_problems():
    return load_problems(FIXTURES, ["blocksworld", "logistics", "rover"])


# ---------------------------------------------------------------------------
# acceptance report: one line per criterion at the end of the run

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    def record(criterion: str, passed: bool, detail: str = "") -> None:
        _ACCEPTANCE[criterion] = (bool(passed), detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = _ACCEPTANCE[key]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")

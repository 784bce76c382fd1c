import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cdkernel import Signature, parse_formula, parse_term

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"

SIG = Signature({"c", "d"}, {"f": 1, "g": 2}, {"P": 1, "Q": 0, "R": 2, "S": 1, "T": 0})

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def fml(text):
    return parse_formula(text, SIG)


def term(text):
    return parse_term(text, SIG)


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(verdicts):
        terminalreporter.write_line(verdicts[n])

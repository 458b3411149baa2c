import sys
from pathlib import Path

import pytest
from hypothesis import settings

from labelbracket import bundled_rules, load_corpus
from labelbracket.rules import DATA_DIR

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

CORPUS_DIR = DATA_DIR / "corpus"
STRESS_DIR = DATA_DIR / "stress"
FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def kauffman():
    return bundled_rules("kauffman")


@pytest.fixture(scope="session")
def skeleton():
    return bundled_rules("label-bracket")


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(CORPUS_DIR)


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            name = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in name and rep.when in ("call", "setup"):
                n = name.rsplit("test_criterion_", 1)[1].split("_")[0]
                verdict = "PASS" if outcome == "passed" else "FAIL"
                if lines.get(n) != "FAIL":
                    lines[n] = verdict
    if lines:
        details = getattr(sys.modules.get("test_acceptance"), "DETAILS", {})
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines, key=int):
            extra = f" ({details[n]})" if n in details else ""
            terminalreporter.write_line(f"criterion {n}: {lines[n]}{extra}")

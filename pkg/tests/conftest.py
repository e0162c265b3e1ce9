import os

# every Groebner basis computed anywhere in the suite (including worker
# processes) is checked by the S-polynomial audit
os.environ.setdefault("AFCONORMAL_AUDIT", "1")

import pytest  # noqa: E402

from afconormal.groebner import settings  # noqa: E402

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CORPUS = os.path.join(ROOT, "corpus")


@pytest.fixture(autouse=True)
def _audit_on():
    old = settings.audit
    settings.audit = True
    yield
    settings.audit = old


@pytest.fixture
def corpus_dir():
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])

import os
import sys
import tempfile

import pytest

sys.path.insert(0, os.path.dirname(__file__))

# Reuse a warm store when one is given; otherwise build one per session.
if not os.environ.get("LADDERLAB_CHECKPOINT_DIR"):
    os.environ["LADDERLAB_CHECKPOINT_DIR"] = tempfile.mkdtemp(prefix="ladderlab-store-")


@pytest.fixture(scope="session")
def store_dir():
    return os.environ["LADDERLAB_CHECKPOINT_DIR"]


@pytest.fixture(scope="session")
def cfg():
    from ladderlab import LadderConfig
    return LadderConfig()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)

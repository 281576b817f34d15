import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cactus_morse import graphs  # noqa: E402

DIGON_LOOP = "([([])])"              # digon at p, loop on its far vertex
TRIANGLE_TWO_LOOPS = "([([])([])])"  # triangle at p, a loop on each rim vertex
DIGON_DIGON_LOOP = "([([([])])])"    # chain digon, digon, loop
DIGON_TWO_LOOPS = "([([][])])"       # digon at p, two loops on the rim vertex


def rose_code(n):
    return "(" + "[]" * n + ")"


@pytest.fixture
def digon_loop():
    return graphs.from_code(DIGON_LOOP)


@pytest.fixture
def triangle():
    return graphs.from_code(TRIANGLE_TWO_LOOPS)


@pytest.fixture
def chain():
    return graphs.from_code(DIGON_DIGON_LOOP)


@pytest.fixture
def cache_dir(tmp_path):
    return tmp_path / "cache"


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for number in sorted(verdicts):
            terminalreporter.write_line(verdicts[number])

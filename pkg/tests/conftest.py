import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aklang import parse_domain, parse_elp, parse_query  # noqa: E402
from aklang.randomized import random_domain, usable  # noqa: E402

DOMAINS = Path(__file__).resolve().parent.parent / "domains"


def load(name):
    return parse_domain((DOMAINS / name).read_text(), name)


def load_query(name):
    return parse_query((DOMAINS / name).read_text(), name)


def load_program(name):
    return parse_elp((DOMAINS / name).read_text(), name)


def domain_from_seed(seed, **kw):
    """Deterministic usable random domain for a hypothesis-drawn seed."""
    rng = random.Random(seed)
    while True:
        d = random_domain(rng, **kw)
        if usable(d):
            return d


@pytest.fixture
def d1():
    return load("d1.akd")


@pytest.fixture
def d1r7():
    return load("d1_r7.akd")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in mod.REPORT:
            terminalreporter.write_line(line)

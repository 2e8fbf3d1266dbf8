import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from pilang.gen import random_comb, random_type
from pilang.syntax import ONE, ZERO, Prod, Sum

PROGRAMS = Path(__file__).resolve().parents[1] / "src" / "pilang" / "programs"
GOLDEN = Path(__file__).resolve().parent / "golden"

types = st.recursive(
    st.sampled_from([ZERO, ONE]),
    lambda inner: st.builds(Sum, inner, inner) | st.builds(Prod, inner, inner),
    max_leaves=6,
)


@st.composite
def typed_combs(draw, max_size=8, depth=4):
    """(combinator, domain) pairs built by the random generator from a drawn seed."""
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    dom = random_type(rng, max_size, 3)
    comb, _ = random_comb(rng, dom, depth)
    return comb, dom


@pytest.fixture
def programs():
    return PROGRAMS


# filled in by test_acceptance.py, printed once at the end of the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])

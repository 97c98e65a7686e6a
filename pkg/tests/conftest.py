from __future__ import annotations

from hypothesis import strategies as st

from groupoidal.pbij import GroundSet, PartialBijection


@st.composite
def pbijs(draw, n=None, max_size=5):
    """A random partial bijection, optionally on a fixed ground size."""
    if n is None:
        n = draw(st.integers(1, max_size))
    src = draw(st.lists(st.integers(0, n - 1), unique=True, max_size=n))
    tgt = draw(st.permutations(range(n)))[:len(src)]
    return PartialBijection.from_pairs(GroundSet(n), zip(src, tgt))


@st.composite
def pbij_pairs(draw, count=2, max_size=5):
    n = draw(st.integers(1, max_size))
    return tuple(draw(pbijs(n)) for _ in range(count))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

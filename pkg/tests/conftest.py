import itertools

from hypothesis import strategies as st

from ordercone.fsa import Alphabet, Fsa


def random_fsa(alphabet: Alphabet, max_states: int = 4):
    """Strategy for complete DFAs over ``alphabet``."""
    k = len(alphabet)

    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_states))
        rows = tuple(
            tuple(draw(st.integers(0, n - 1)) for _ in range(k)) for _ in range(n)
        )
        accept = frozenset(draw(st.sets(st.integers(0, n - 1))))
        return Fsa(alphabet, rows, accept, draw(st.integers(0, n - 1)))

    return build()


def words(alphabet_size: int, max_len: int):
    for n in range(max_len + 1):
        yield from itertools.product(range(alphabet_size), repeat=n)


ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

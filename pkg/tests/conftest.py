import pathlib

import pytest

from supred.automata import parse_automaton

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def tank():
    """Single-tank plant and supervisor (G, S)."""
    g, s = parse_automaton((FIXTURES / "tank.aut").read_text())
    return g, s


@pytest.fixture(scope="session")
def ordering_example():
    """Fineness example (G, S1, S2)."""
    g, s1, s2 = parse_automaton((FIXTURES / "ordering.aut").read_text())
    return g, s1, s2


@pytest.fixture(scope="session")
def nontransitive_example():
    g, s = parse_automaton((FIXTURES / "nontransitive.aut").read_text())
    return g, s

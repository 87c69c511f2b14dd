"""Walkthrough: the fineness order predicts how far supervisors reduce.

Two control-equivalent supervisors of one plant both disable d1 and d2
after the event c.  S1 tracks c with a dedicated state while S2 folds it
back into its initial state, so S2's initial state carries blurrier
information (a larger disabled set, marking where S1 has none).  S1 is
finer than S2, and accordingly reduces further: 2 states against 3.
"""

import pathlib

from supred import (
    compare_reductions,
    control_equivalent,
    finer_than,
    parse_automaton,
    reduce_exact_minimum,
)
from supred.cli import control_data_table

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

g, s1, s2 = parse_automaton((FIXTURES / "ordering.aut").read_text())

equal, _ = control_equivalent(g, s1, s2)
print(f"S1 and S2 control equivalent: {equal}\n")

print("S1 control data:")
print(control_data_table(g, s1))
print("\nS2 control data:")
print(control_data_table(g, s2))
print()

forward = finer_than(g, s1, s1, s2)
print(f"S1 finer than S2: {forward.verdict}")
backward = finer_than(g, s1, s2, s1)
string, clause = backward.counterexample
rendered = " ".join(string) if string else "the empty string"
print(f"S2 finer than S1: {backward.verdict} "
      f"(after {rendered}, the {clause} containment fails)\n")

_, r1 = reduce_exact_minimum(g, s1, mode="cover")
_, r2 = reduce_exact_minimum(g, s2, mode="cover")
print(f"exact minimum reductions: S1 -> {r1.output_size} states, "
      f"S2 -> {r2.output_size} states")

size1, size2, ordered = compare_reductions(g, s1, s1, s2)
print(f"finer supervisor reduces at least as well: {ordered} "
      f"({size1} <= {size2})")

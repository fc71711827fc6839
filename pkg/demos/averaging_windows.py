"""Averaging windows in the integers, from scratch.

A finite set B is eps-Ramsey for a window A when every subset E of B can
be averaged: some probability measure, movable by the window without
leaving B, measures all window translates of E within eps of each other.
This script walks the smallest interesting instances in Z and shows how
a single averaging step contracts the gap of an arbitrary [0,1]-valued
function, and how composing steps drives the gap below any target.
"""

from fractions import Fraction as Q

from amenlab import (
    FreeAbelianGroup,
    ball,
    boost,
    interior,
    is_epsilon_ramsey,
    ramsey_function,
    subset_measure,
)

Z = FreeAbelianGroup(1)
window = ball(Z, 1)
print("window A = ball(1):", list(window))

# The admissible supports are the interior points: those the window can
# push around without leaving B.
for n in (1, 2, 3):
    C = interior(window, ball(Z, n))
    print(f"interior of ball({n}):", list(C))

# ball(1) is too tight at eps = 1/2: some subset resists averaging.
verdict = is_epsilon_ramsey(window, ball(Z, 1), Q(1, 2))
print("\nball(1) 1/2-Ramsey?", verdict.is_ramsey)
print("least failing subset:", list(verdict.counterexample.elements))

# ball(2) suffices, by either decision route.
for method in ("direct", "pictures"):
    v = is_epsilon_ramsey(window, ball(Z, 2), Q(1, 2), method=method)
    print(f"ball(2) 1/2-Ramsey via {method}?", v.is_ramsey)

print("\nleast radius map:", ramsey_function(Z, 1, Q(1, 2), 4).value)

# One subset at a time: a measure averaging the nonnegative half.
E = [x for x in ball(Z, 2) if x.value[0] >= 0]
nu = subset_measure(window, ball(Z, 2), E, Q(1, 2))
print("\nmeasure averaging {x >= 0}:", nu.to_json())

# Boosting: compose single steps until an arbitrary [0,1] function is
# averaged within (3/4)^k, verified exactly at every level.
ramp = lambda g: max(Q(0), min(Q(1), Q(g.value[0] + 8, 16)))
for k in (1, 2, 3):
    result = boost(window, ramp, Q(3, 4) ** k)
    print(
        f"boost k={k}: tower radii {[len(s.next_window) // 2 for s in result.steps]},"
        f" verified gap {result.final_gap} <= (3/4)^{k}"
    )

"""Balanced families and their exact dual certificates.

A family of subsets of a finite ground set is balanced when some convex
combination of the members' characteristic vectors is constant; the
balance deficiency is how far from constant the best combination must
stay.  The dual picture: a family fails to be balanced exactly when some
zero-sum weighting of the ground set is strictly positive on every
member.  Both sides are rational and verifiable, and exactly one of them
exists for every family — demonstrated here by sweeping all 255 families
on three points.
"""

from amenlab import (
    SetFamily,
    balance_deficiency,
    family_of_positive_sets,
    unbalance_witness,
)

# A lone proper subset is maximally unbalanced: the combined vector is
# stuck at its own characteristic vector.
lone = SetFamily("xy", [["x"]])
eps, witness = balance_deficiency(lone)
print("family {{x}} over {x,y}: deficiency", eps, "vector", witness.vector)
print("dual weighting:", unbalance_witness(lone).values)

# Two disjoint singletons average out perfectly.
pair = SetFamily("xy", [["x"], ["y"]])
print("\nfamily {{x},{y}}: deficiency", balance_deficiency(pair)[0])

# Start from a weighting instead: every positive-sum subset of (2,-1,-1).
fam = family_of_positive_sets((2, -1, -1), "xyz")
print("\npositive-sum family of (2,-1,-1):", fam.member_labels())
print("its dual witness:", unbalance_witness(fam).values)

# The exhaustive dichotomy on a three-point ground set.
balanced = unbalanced = 0
for selector in range(1, 1 << 8):
    family = SetFamily("xyz", [m for m in range(8) if selector >> m & 1])
    eps, _ = balance_deficiency(family)
    dual = unbalance_witness(family)
    assert (eps == 0) != (dual is not None)
    if eps == 0:
        balanced += 1
    else:
        unbalanced += 1
print(f"\nall 255 families on three points: {balanced} balanced, {unbalanced} unbalanced")

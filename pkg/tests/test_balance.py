import random
from fractions import Fraction as Q

import pytest

from amenlab.balance import (
    BalanceWitness,
    SetFamily,
    UnbalanceWitness,
    balance_deficiency,
    family_of_positive_sets,
    is_epsilon_balanced,
    unbalance_witness,
    verify_balance_witness,
    verify_unbalance_witness,
)
from amenlab.groups import CapExceeded


def fam(ground, members):
    return SetFamily(ground, members)


def test_full_member_is_balanced():
    f = fam("xyz", ["xyz"])
    eps, w = balance_deficiency(f)
    assert eps == 0
    assert w.vector == (1, 1, 1)


def test_two_disjoint_singletons():
    f = fam("01", [["0"], ["1"]])
    eps, w = balance_deficiency(f)
    assert eps == 0
    assert w.weights == (Q(1, 2), Q(1, 2))
    assert unbalance_witness(f) is None


def test_single_proper_member():
    f = fam("01", [["0"]])
    eps, w = balance_deficiency(f)
    assert eps == 1  # v is forced to (1, 0)
    assert w.vector == (1, 0)
    witness = unbalance_witness(f)
    assert witness is not None
    assert sum(witness.values) == 0
    assert witness.margin >= 1


def test_is_epsilon_balanced_thresholds():
    f = fam("01", [["0"]])
    ok, w = is_epsilon_balanced(f, 1)
    assert ok and w is not None
    ok, w = is_epsilon_balanced(f, Q(1, 2))
    assert not ok and w is None
    ok, _ = is_epsilon_balanced(fam("01", [["0"], ["1"]]), 0)
    assert ok


def test_eps_must_be_nonnegative():
    with pytest.raises(ValueError):
        is_epsilon_balanced(fam("01", [["0"]]), -1)


def test_empty_family_rejected():
    f = fam("01", [])
    with pytest.raises(ValueError):
        balance_deficiency(f)
    with pytest.raises(ValueError):
        unbalance_witness(f)


def test_family_with_empty_member_is_balanced():
    # all the weight may sit on the empty member, pinning v at 0
    f = fam("01", [[], ["0"]])
    eps, w = balance_deficiency(f)
    assert eps == 0
    assert w.vector == (0, 0)


def test_unbalance_witness_definitional_example():
    # weighting (2, -1, -1): every positive-sum subset keeps f-sum > 0
    values = (Q(2), Q(-1), Q(-1))
    f = family_of_positive_sets(values, "xyz")
    assert set(map(frozenset, f.member_labels())) == {
        frozenset("x"),
        frozenset("xy"),
        frozenset("xz"),
    }
    witness = unbalance_witness(f)
    assert witness is not None
    assert verify_unbalance_witness(f, witness)


def test_family_of_positive_sets_small():
    f = family_of_positive_sets((1, -1), "01")
    assert f.member_labels() == [("0",)]
    single = family_of_positive_sets((0,), "x")
    assert len(single) == 0


def test_family_of_positive_sets_validation():
    with pytest.raises(ValueError):
        family_of_positive_sets((1, 1), "01")  # sum != 0
    with pytest.raises(CapExceeded):
        family_of_positive_sets((0,) * 21, range(21))


def _all_families_on(ground):
    width = len(ground)
    subsets = list(range(1 << width))
    for member_selector in range(1, 1 << len(subsets)):
        members = [subsets[i] for i in range(len(subsets)) if member_selector >> i & 1]
        yield SetFamily(ground, members)


def test_exact_duality_on_two_point_ground():
    # exhaustive over all 15 nonempty families on two points
    for family in _all_families_on("01"):
        eps, witness = balance_deficiency(family)
        dual = unbalance_witness(family)
        assert (eps == 0) != (dual is not None)
        assert verify_balance_witness(family, witness)
        if dual is not None:
            assert verify_unbalance_witness(family, dual)


def test_monotone_in_eps_and_superfamily_closure():
    rng = random.Random(11)
    ground = "abcd"
    for _ in range(40):
        members = rng.sample(range(1, 16), rng.randint(1, 6))
        family = SetFamily(ground, members)
        eps, _ = balance_deficiency(family)
        # balanced at eps implies balanced at every larger threshold
        for bump in (0, Q(1, 7), Q(1, 2)):
            ok, _ = is_epsilon_balanced(family, eps + bump)
            assert ok
        # adding members can only help: witnesses may put weight 0 on them
        extra = rng.randint(0, 15)
        superfamily = SetFamily(ground, list(members) + [extra])
        super_eps, _ = balance_deficiency(superfamily)
        assert super_eps <= eps


def test_balance_witness_tampering_detected():
    f = fam("01", [["0"], ["1"]])
    _, w = balance_deficiency(f)
    bad = BalanceWitness(w.weights, w.vector, w.gap + 1)
    assert not verify_balance_witness(f, bad)
    bad2 = BalanceWitness((Q(2), Q(-1)), w.vector, w.gap)
    assert not verify_balance_witness(f, bad2)
    good_dual = UnbalanceWitness((Q(1), Q(-1)), Q(1))
    assert verify_unbalance_witness(fam("01", [["0"]]), good_dual)
    assert not verify_unbalance_witness(fam("01", [["0"]]), UnbalanceWitness((Q(1), Q(-1)), Q(2)))


def test_deficiency_bounds():
    rng = random.Random(12)
    for _ in range(30):
        members = rng.sample(range(8), rng.randint(1, 8))
        family = SetFamily("pqr", members)
        eps, _ = balance_deficiency(family)
        assert 0 <= eps <= 1


def test_family_json_roundtrip():
    f = fam("xy", [["x"], ["x", "y"]])
    assert SetFamily.from_json(f.to_json()) == f

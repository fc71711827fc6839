"""Balanced and unbalanced families of subsets of a finite window.

A family of subsets of an ordered ground set is eps-balanced when some
convex combination of the characteristic vectors of its members has
max - min at most eps.  The least such eps (the balance deficiency) is
computed by a single exact LP; the dual phenomenon is an unbalance
witness: a zero-sum rational weighting of the ground set whose sum over
every member is strictly positive (normalized here to margin >= 1).
Exactly one of {deficiency == 0, witness exists} holds for every
nonempty family, and both sides are verifiable by plain arithmetic.

Members are stored as bitmasks over the ground order, so families stay
hashable and deduplication is cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .groups import CapExceeded
from .linprog import EQ, GE, LE, LinearSystem, minimize, solve_feasibility
from .rationals import fmt_q, parse_q

_F0 = Fraction(0)
_F1 = Fraction(1)


class SetFamily:
    """A deduplicated collection of subsets of an ordered ground set."""

    def __init__(self, ground: Sequence, members: Iterable):
        self.ground = tuple(ground)
        if not self.ground:
            raise ValueError("ground set must be nonempty")
        width = len(self.ground)
        index = {label: i for i, label in enumerate(self.ground)}
        if len(index) != width:
            raise ValueError("ground labels must be distinct")
        masks = set()
        for member in members:
            if isinstance(member, int):
                mask = member
                if not 0 <= mask < (1 << width):
                    raise ValueError(f"member bitmask out of range: {mask}")
            else:
                mask = 0
                for label in member:
                    mask |= 1 << index[label]
            masks.add(mask)
        self.members: tuple[int, ...] = tuple(sorted(masks))

    def __eq__(self, other):
        return (
            isinstance(other, SetFamily)
            and self.ground == other.ground
            and self.members == other.members
        )

    def __hash__(self):
        return hash((self.ground, self.members))

    def __len__(self):
        return len(self.members)

    def member_labels(self) -> list[tuple]:
        """Members as tuples of ground labels, in canonical member order."""
        out = []
        for mask in self.members:
            out.append(tuple(g for i, g in enumerate(self.ground) if mask >> i & 1))
        return out

    def to_json(self, label=str) -> dict:
        return {
            "ground": [label(g) for g in self.ground],
            "members": [[label(g) for g in mem] for mem in self.member_labels()],
        }

    @classmethod
    def from_json(cls, obj: Mapping, parse: Callable = None) -> "SetFamily":
        parse = parse or (lambda s: s)
        ground = [parse(g) for g in obj["ground"]]
        members = [[parse(g) for g in mem] for mem in obj["members"]]
        return cls(ground, members)

    def __repr__(self):
        return f"SetFamily(ground={self.ground!r}, members={self.member_labels()!r})"


@dataclass(frozen=True)
class BalanceWitness:
    """Convex weights over the members attaining a max-min gap."""

    weights: tuple[Fraction, ...]  # aligned with SetFamily.members
    vector: tuple[Fraction, ...]  # combined characteristic vector over ground
    gap: Fraction

    def to_json(self) -> dict:
        return {
            "weights": [fmt_q(x) for x in self.weights],
            "vector": [fmt_q(x) for x in self.vector],
            "gap": fmt_q(self.gap),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "BalanceWitness":
        return cls(
            tuple(parse_q(x) for x in obj["weights"]),
            tuple(parse_q(x) for x in obj["vector"]),
            parse_q(obj["gap"]),
        )


@dataclass(frozen=True)
class UnbalanceWitness:
    """Zero-sum ground weighting with positive sum on every member."""

    values: tuple[Fraction, ...]  # aligned with SetFamily.ground
    margin: Fraction  # min over members of the member sum; >= 1

    def to_json(self) -> dict:
        return {
            "values": [fmt_q(x) for x in self.values],
            "margin": fmt_q(self.margin),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "UnbalanceWitness":
        return cls(tuple(parse_q(x) for x in obj["values"]), parse_q(obj["margin"]))


def _combined_vector(family: SetFamily, weights: Sequence[Fraction]) -> tuple[Fraction, ...]:
    width = len(family.ground)
    v = [_F0] * width
    for mask, lam in zip(family.members, weights):
        if lam:
            for i in range(width):
                if mask >> i & 1:
                    v[i] += lam
    return tuple(v)


def _member_sums(family: SetFamily, values: Sequence[Fraction]) -> list[Fraction]:
    out = []
    for mask in family.members:
        out.append(
            sum((values[i] for i in range(len(family.ground)) if mask >> i & 1), _F0)
        )
    return out


def deficiency_system(family: SetFamily) -> LinearSystem:
    """The deficiency LP: convex member weights, then t_hi, t_lo.

    Row order (relied on by certificate verification): the convexity row,
    then per ground position the upper bound followed by the lower bound.
    """
    if not family.members:
        raise ValueError("balance decisions need a nonempty family")
    k = len(family.members)
    width = len(family.ground)
    rows = [(tuple([_F1] * k + [_F0, _F0]), EQ, _F1)]
    for i in range(width):
        coeffs = [_F1 if mask >> i & 1 else _F0 for mask in family.members]
        rows.append((tuple(coeffs + [Fraction(-1), _F0]), LE, _F0))
        rows.append((tuple(coeffs + [_F0, Fraction(-1)]), GE, _F0))
    objective = (tuple([_F0] * k + [_F1, Fraction(-1)]), "min")
    nonneg = [True] * k + [False, False]
    return LinearSystem(k + 2, rows, objective, nonneg)


def balance_deficiency(family: SetFamily) -> tuple[Fraction, BalanceWitness]:
    """Least eps for which the family is eps-balanced, with attaining weights.

    One LP: minimize t_hi - t_lo over convex weights, where the combined
    vector is pinned between t_lo and t_hi coordinatewise.  Zero weights
    are allowed, so any superfamily of a balanced family stays balanced.
    """
    k = len(family.members)
    opt = minimize(deficiency_system(family))
    weights = tuple(opt.point[:k])
    witness = BalanceWitness(weights, _combined_vector(family, weights), opt.value)
    if not verify_balance_witness(family, witness):
        raise RuntimeError("internal error: balance witness failed verification")
    return opt.value, witness


def deficiency_optimum(family: SetFamily):
    """The deficiency LP together with its solved, verifiable optimum."""
    system = deficiency_system(family)
    return system, minimize(system)


def is_epsilon_balanced(family: SetFamily, eps) -> tuple[bool, BalanceWitness | None]:
    """Whether some convex combination has gap <= eps; witness when true."""
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be >= 0")
    value, witness = balance_deficiency(family)
    if value <= eps:
        return True, witness
    return False, None


def unbalance_witness(family: SetFamily) -> UnbalanceWitness | None:
    """A zero-sum f positive on every member, or None when balanced.

    Strictness is handled by scaling: feasibility of member sums >= 1 is
    equivalent to the existence of f with all member sums > 0.
    """
    if not family.members:
        raise ValueError("balance decisions need a nonempty family")
    width = len(family.ground)
    rows = [(tuple([_F1] * width), EQ, _F0)]
    for mask in family.members:
        coeffs = tuple(_F1 if mask >> i & 1 else _F0 for i in range(width))
        rows.append((coeffs, GE, _F1))
    out = solve_feasibility(LinearSystem(width, rows))
    if not out.feasible:
        return None
    values = tuple(out.point)
    witness = UnbalanceWitness(values, min(_member_sums(family, values)))
    if not verify_unbalance_witness(family, witness):
        raise RuntimeError("internal error: unbalance witness failed verification")
    return witness


def family_of_positive_sets(values: Sequence, ground: Sequence, *, cap: int = 20) -> SetFamily:
    """All subsets of the ground set whose value sum is strictly positive.

    The input weighting must sum to zero; the ground set is limited to
    ``cap`` points because every subset is enumerated.
    """
    ground = tuple(ground)
    vals = [Fraction(v) for v in values]
    if len(vals) != len(ground):
        raise ValueError("values must align with the ground set")
    if sum(vals, _F0) != 0:
        raise ValueError("values must sum to zero")
    if len(ground) > cap:
        raise CapExceeded(f"ground set larger than cap {cap}")
    members = []
    for mask in range(1, 1 << len(ground)):
        total = _F0
        m = mask
        i = 0
        while m:
            if m & 1:
                total += vals[i]
            m >>= 1
            i += 1
        if total > 0:
            members.append(mask)
    return SetFamily(ground, members)


def verify_balance_witness(family: SetFamily, witness: BalanceWitness, eps=None) -> bool:
    """Exact recheck: convexity, vector recomputation, gap, optional bound."""
    if len(witness.weights) != len(family.members):
        return False
    if any(w < 0 for w in witness.weights):
        return False
    if sum(witness.weights, _F0) != 1:
        return False
    vector = _combined_vector(family, witness.weights)
    if vector != tuple(witness.vector):
        return False
    if max(vector) - min(vector) != witness.gap:
        return False
    if eps is not None and witness.gap > Fraction(eps):
        return False
    return True


def verify_unbalance_witness(family: SetFamily, witness: UnbalanceWitness) -> bool:
    """Exact recheck: zero sum, margin recomputation, normalized margin."""
    if len(witness.values) != len(family.ground):
        return False
    if sum(witness.values, _F0) != 0:
        return False
    sums = _member_sums(family, witness.values)
    if not sums or min(sums) != witness.margin:
        return False
    return witness.margin >= 1

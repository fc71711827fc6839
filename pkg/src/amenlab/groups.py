"""Group arithmetic over canonical element forms.

Supported groups: free groups on lettered generators (freely reduced
words), free abelian groups (integer exponent vectors), cyclic groups,
and finite groups given by a multiplication table.  Element forms are
canonical and unique, so equality is structural; everything downstream
(balls, translations, finitely supported measures and convolution) is
exact rational arithmetic with no floating point anywhere.

Conventions fixed here and relied on by the rest of the package:

* The word metric counts letters from ``S ∪ S⁻¹`` even when the
  generating set ``S`` is not closed under inversion, so `ball` always
  satisfies ``|B_n| <= (2|S|+1)**n``.
* The canonical total order is shortlex on reduced words (a generator
  precedes its own inverse, which precedes the next generator),
  lexicographic on exponent vectors, and index order on finite groups.
* Free-group words serialize as compact strings with uppercase meaning
  inverse ("aBa" is a·b⁻¹·a) and "e" for the identity, which is why
  free-group generator names must be single lowercase letters.
"""

from __future__ import annotations

import string
from fractions import Fraction
from typing import Iterable, Mapping


class CapExceeded(Exception):
    """A configurable resource cap (ball size, enumeration count) was hit."""


class GroupError(ValueError):
    """Invalid descriptor data or mismatched group membership."""


class Element:
    """Canonical-form group element; treat as immutable."""

    __slots__ = ("group", "value", "_hash")

    def __init__(self, group: "Group", value):
        self.group = group
        self.value = value
        self._hash = hash((group, value))

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.group == other.group
            and self.value == other.value
        )

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "Element") -> "Element":
        return self.group.multiply(self, other)

    def __pow__(self, n: int) -> "Element":
        g = self.group
        if n < 0:
            return g.inverse(self) ** (-n)
        out = g.identity()
        base = self
        while n:
            if n & 1:
                out = g.multiply(out, base)
            base = g.multiply(base, base)
            n >>= 1
        return out

    def inverse(self) -> "Element":
        return self.group.inverse(self)

    def key(self):
        """Sort key realizing the group's canonical total order."""
        return self.group.sort_key(self.value)

    def __repr__(self):
        return self.group.format_element(self)


def sort_elements(elems: Iterable[Element]) -> list[Element]:
    return sorted(elems, key=lambda e: e.key())


class Group:
    """Base descriptor; concrete kinds implement the group law."""

    kind = "?"
    _desc: tuple

    def __eq__(self, other):
        return isinstance(other, Group) and self._desc == other._desc

    def __hash__(self):
        return hash(self._desc)

    def _check(self, g: Element) -> Element:
        if g.group != self:
            raise GroupError("element does not belong to this group")
        return g

    # concrete kinds supply: identity, multiply, inverse, generators,
    # sort_key, format_element, parse_element, element_to_json,
    # element_from_json, to_json

    def __repr__(self):
        import json

        return f"{type(self).__name__}({json.dumps(self.to_json())})"


class FreeGroup(Group):
    """Free group on named generators; elements are freely reduced words.

    Words are tuples of nonzero signed integers: letter ``i+1`` is the
    i-th generator, ``-(i+1)`` its inverse.  Reduction (no adjacent
    cancelling pair) is maintained by construction.
    """

    kind = "free"

    def __init__(self, generators: Iterable[str]):
        names = tuple(generators)
        if len(names) < 1:
            raise GroupError("free group needs rank >= 1")
        if len(set(names)) != len(names):
            raise GroupError("generator names must be distinct")
        for name in names:
            if len(name) != 1 or name not in string.ascii_lowercase or name == "e":
                raise GroupError(
                    f"free-group generator must be a single lowercase letter other than 'e': {name!r}"
                )
        self.gen_names = names
        self._desc = ("free", names)

    @property
    def rank(self) -> int:
        return len(self.gen_names)

    def identity(self) -> Element:
        return Element(self, ())

    def generators(self) -> tuple[Element, ...]:
        return tuple(Element(self, (i + 1,)) for i in range(self.rank))

    def multiply(self, g: Element, h: Element) -> Element:
        self._check(g)
        self._check(h)
        word = list(g.value)
        for letter in h.value:
            if word and word[-1] == -letter:
                word.pop()
            else:
                word.append(letter)
        return Element(self, tuple(word))

    def inverse(self, g: Element) -> Element:
        self._check(g)
        return Element(self, tuple(-letter for letter in reversed(g.value)))

    def sort_key(self, value):
        # shortlex; generator < its inverse < next generator
        return (
            len(value),
            tuple(2 * (abs(l) - 1) + (1 if l < 0 else 0) for l in value),
        )

    def format_element(self, g: Element) -> str:
        if not g.value:
            return "e"
        out = []
        for letter in g.value:
            name = self.gen_names[abs(letter) - 1]
            out.append(name if letter > 0 else name.upper())
        return "".join(out)

    def parse_element(self, text: str) -> Element:
        s = text.strip()
        if s == "e":
            return self.identity()
        word: list[int] = []
        for ch in s:
            low = ch.lower()
            if low not in self.gen_names:
                raise GroupError(f"unknown letter {ch!r} in word {text!r}")
            letter = self.gen_names.index(low) + 1
            if ch in string.ascii_uppercase:
                letter = -letter
            if word and word[-1] == -letter:
                word.pop()
            else:
                word.append(letter)
        return Element(self, tuple(word))

    def element_to_json(self, g: Element) -> str:
        return self.format_element(g)

    def element_from_json(self, obj) -> Element:
        return self.parse_element(str(obj))

    def to_json(self) -> dict:
        return {"kind": "free", "generators": list(self.gen_names)}


class FreeAbelianGroup(Group):
    """Z^d with the standard basis as generating set; elements are vectors."""

    kind = "free_abelian"

    def __init__(self, rank: int):
        if rank < 1:
            raise GroupError("free abelian group needs rank >= 1")
        self.rank = rank
        self._desc = ("free_abelian", rank)

    def identity(self) -> Element:
        return Element(self, (0,) * self.rank)

    def generators(self) -> tuple[Element, ...]:
        gens = []
        for i in range(self.rank):
            v = [0] * self.rank
            v[i] = 1
            gens.append(Element(self, tuple(v)))
        return tuple(gens)

    def multiply(self, g: Element, h: Element) -> Element:
        self._check(g)
        self._check(h)
        return Element(self, tuple(a + b for a, b in zip(g.value, h.value)))

    def inverse(self, g: Element) -> Element:
        self._check(g)
        return Element(self, tuple(-a for a in g.value))

    def sort_key(self, value):
        return value

    def format_element(self, g: Element) -> str:
        if self.rank == 1:
            return str(g.value[0])
        return "(" + ",".join(str(a) for a in g.value) + ")"

    def parse_element(self, text) -> Element:
        if isinstance(text, (list, tuple)):
            vec = tuple(int(a) for a in text)
        else:
            s = str(text).strip().strip("()")
            vec = tuple(int(part) for part in s.split(",")) if s else ()
        if len(vec) != self.rank:
            raise GroupError(f"expected {self.rank} coordinates, got {vec!r}")
        return Element(self, vec)

    def element_to_json(self, g: Element):
        return list(g.value) if self.rank > 1 else g.value[0]

    def element_from_json(self, obj) -> Element:
        if isinstance(obj, int):
            obj = [obj]
        return self.parse_element(obj)

    def to_json(self) -> dict:
        return {"kind": "free_abelian", "rank": self.rank}


class CyclicGroup(Group):
    """Z_n written additively, generated by 1; elements are residues."""

    kind = "cyclic"

    def __init__(self, order: int):
        if order < 1:
            raise GroupError("cyclic group needs order >= 1")
        self.order = order
        self._desc = ("cyclic", order)

    def identity(self) -> Element:
        return Element(self, 0)

    def generators(self) -> tuple[Element, ...]:
        return (Element(self, 1 % self.order),)

    def multiply(self, g: Element, h: Element) -> Element:
        self._check(g)
        self._check(h)
        return Element(self, (g.value + h.value) % self.order)

    def inverse(self, g: Element) -> Element:
        self._check(g)
        return Element(self, (-g.value) % self.order)

    def sort_key(self, value):
        return value

    def format_element(self, g: Element) -> str:
        return str(g.value)

    def parse_element(self, text) -> Element:
        v = int(text)
        if not 0 <= v < self.order:
            raise GroupError(f"residue out of range: {v}")
        return Element(self, v)

    def element_to_json(self, g: Element):
        return g.value

    def element_from_json(self, obj) -> Element:
        return self.parse_element(obj)

    def to_json(self) -> dict:
        return {"kind": "cyclic", "order": self.order}


# Associativity of a multiplication table is verified eagerly only up to
# this order; larger tables are accepted with the check skipped and flagged.
ASSOCIATIVITY_CHECK_LIMIT = 256


class TableGroup(Group):
    """Finite group given by an explicit multiplication table.

    ``table[i][j]`` is the index of the product of elements i and j.  The
    table must be a Latin square with a two-sided identity; associativity
    is verified at construction for orders up to
    `ASSOCIATIVITY_CHECK_LIMIT` (the `associativity_verified` attribute
    records whether the check ran).
    """

    kind = "finite_table"

    def __init__(self, table, generators: Iterable[int] | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in table)
        n = len(rows)
        if n < 1:
            raise GroupError("empty multiplication table")
        for row in rows:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise GroupError("multiplication table must be square with entries in range")
        full = frozenset(range(n))
        for i in range(n):
            if frozenset(rows[i]) != full:
                raise GroupError(f"row {i} is not a permutation")
            if frozenset(rows[j][i] for j in range(n)) != full:
                raise GroupError(f"column {i} is not a permutation")
        ident = None
        for ecand in range(n):
            if all(rows[ecand][x] == x and rows[x][ecand] == x for x in range(n)):
                ident = ecand
                break
        if ident is None:
            raise GroupError("table has no two-sided identity")
        self.table = rows
        self.order = n
        self._identity_index = ident
        self.associativity_verified = n <= ASSOCIATIVITY_CHECK_LIMIT
        if self.associativity_verified:
            rng = range(n)
            for a in rng:
                ra = rows[a]
                for b in rng:
                    rab = rows[ra[b]]
                    rb = rows[b]
                    for c in rng:
                        if rab[c] != ra[rb[c]]:
                            raise GroupError("table is not associative")
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if rows[a][b] == ident and rows[b][a] == ident:
                    inv[a] = b
                    break
            if inv[a] is None:
                raise GroupError(f"element {a} has no two-sided inverse")
        self._inverse_index = tuple(inv)
        if generators is None:
            gens = tuple(i for i in range(n) if i != ident) or (ident,)
        else:
            gens = tuple(int(i) for i in generators)
            if len(gens) < 1 or any(not 0 <= i < n for i in gens):
                raise GroupError("generator indices out of range")
        self._gen_indices = gens
        self._desc = ("finite_table", rows, gens)
        if not self._generates(gens):
            raise GroupError("the given generators do not generate the group")

    def _generates(self, gens) -> bool:
        seen = {self._identity_index}
        frontier = [self._identity_index]
        closure = set(gens) | {self._inverse_index[i] for i in gens}
        while frontier:
            nxt = []
            for x in frontier:
                for s in closure:
                    y = self.table[s][x]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return len(seen) == self.order

    def identity(self) -> Element:
        return Element(self, self._identity_index)

    def generators(self) -> tuple[Element, ...]:
        return tuple(Element(self, i) for i in self._gen_indices)

    def multiply(self, g: Element, h: Element) -> Element:
        self._check(g)
        self._check(h)
        return Element(self, self.table[g.value][h.value])

    def inverse(self, g: Element) -> Element:
        self._check(g)
        return Element(self, self._inverse_index[g.value])

    def sort_key(self, value):
        return value

    def format_element(self, g: Element) -> str:
        return str(g.value)

    def parse_element(self, text) -> Element:
        v = int(text)
        if not 0 <= v < self.order:
            raise GroupError(f"table index out of range: {v}")
        return Element(self, v)

    def element_to_json(self, g: Element):
        return g.value

    def element_from_json(self, obj) -> Element:
        return self.parse_element(obj)

    def to_json(self) -> dict:
        out = {"kind": "finite_table", "table": [list(r) for r in self.table]}
        if self._gen_indices != tuple(
            i for i in range(self.order) if i != self._identity_index
        ):
            out["generators"] = list(self._gen_indices)
        return out


def group_from_json(obj: Mapping) -> Group:
    """Build a group from its descriptor JSON."""
    kind = obj.get("kind")
    if kind == "free":
        return FreeGroup(obj["generators"])
    if kind == "free_abelian":
        return FreeAbelianGroup(int(obj["rank"]))
    if kind == "cyclic":
        return CyclicGroup(int(obj["order"]))
    if kind == "finite_table":
        return TableGroup(obj["table"], obj.get("generators"))
    raise GroupError(f"unknown group kind: {kind!r}")


def ball(group: Group, radius: int, *, cap: int | None = None) -> tuple[Element, ...]:
    """Word-metric ball B_radius, canonically ordered.

    Computed as the breadth-first closure of {e} under left multiplication
    by S ∪ S⁻¹, so B_0 = {e} and |B_n| <= (2|S|+1)**n.  Raises
    `CapExceeded` if the ball grows past ``cap`` elements.
    """
    if radius < 0:
        raise GroupError("ball radius must be >= 0")
    steps = set()
    for g in group.generators():
        steps.add(g)
        steps.add(g.inverse())
    seen = {group.identity()}
    frontier = list(seen)
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for s in steps:
                y = s * x
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if cap is not None and len(seen) > cap:
            raise CapExceeded(f"ball exceeded cap of {cap} elements")
        if not nxt:
            break
        frontier = nxt
    return tuple(sort_elements(seen))


def translate_set(g: Element, elems: Iterable[Element]) -> frozenset[Element]:
    """Left translate g·E = {g·x : x in E}."""
    return frozenset(g * x for x in elems)


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise GroupError("measure weights must be exact rationals, not floats")
    return Fraction(x)


class Measure:
    """Finitely supported probability measure with exact rational weights.

    Only nonzero weights are stored; weights are validated to be
    nonnegative and to sum to exactly 1.
    """

    __slots__ = ("group", "weights")

    def __init__(self, group: Group, weights: Mapping[Element, Fraction]):
        clean: dict[Element, Fraction] = {}
        total = Fraction(0)
        for el, w in weights.items():
            if el.group != group:
                raise GroupError("measure support must live in the stated group")
            f = _as_fraction(w)
            if f < 0:
                raise GroupError("measure weights must be nonnegative")
            if f:
                clean[el] = f
                total += f
        if total != 1:
            raise GroupError(f"measure weights must sum to 1, got {total}")
        self.group = group
        self.weights = {el: clean[el] for el in sort_elements(clean)}

    @classmethod
    def point_mass(cls, g: Element) -> "Measure":
        return cls(g.group, {g: Fraction(1)})

    @classmethod
    def uniform(cls, elems: Iterable[Element]) -> "Measure":
        elems = list(elems)
        if not elems:
            raise GroupError("uniform measure needs a nonempty support")
        w = Fraction(1, len(elems))
        return cls(elems[0].group, {el: w for el in elems})

    def support(self) -> tuple[Element, ...]:
        return tuple(self.weights)

    def __eq__(self, other):
        return (
            isinstance(other, Measure)
            and self.group == other.group
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.group, tuple(self.weights.items())))

    def convolve(self, other: "Measure") -> "Measure":
        """Convolution: weight at z is the sum of μ(x)·ν(y) over xy = z."""
        if other.group != self.group:
            raise GroupError("cannot convolve measures on different groups")
        out: dict[Element, Fraction] = {}
        for x, wx in self.weights.items():
            for y, wy in other.weights.items():
                z = x * y
                out[z] = out.get(z, Fraction(0)) + wx * wy
        return Measure(self.group, out)

    def translated(self, g: Element) -> "Measure":
        """g·ν, the pushforward under left translation by g."""
        return Measure(self.group, {g * x: w for x, w in self.weights.items()})

    def of_set(self, membership) -> Fraction:
        """ν(E) for E given as an element collection or membership test."""
        if callable(membership):
            test = membership
        elif hasattr(membership, "contains"):
            test = membership.contains
        else:
            pool = frozenset(membership)
            test = pool.__contains__
        return sum((w for el, w in self.weights.items() if test(el)), Fraction(0))

    def of_function(self, f) -> Fraction:
        """ν(f) = Σ ν({g})·f(g); f must be defined on the whole support."""
        get = f if callable(f) else f.__getitem__
        total = Fraction(0)
        for el, w in self.weights.items():
            try:
                val = get(el)
            except KeyError:
                raise GroupError(f"function undefined on support element {el!r}") from None
            total += w * _as_fraction(val)
        return total

    def mix(self, alpha: Fraction, other: "Measure") -> "Measure":
        """Convex combination α·self + (1-α)·other."""
        alpha = _as_fraction(alpha)
        if not 0 <= alpha <= 1:
            raise GroupError("mixing weight must lie in [0,1]")
        out = {el: alpha * w for el, w in self.weights.items()}
        for el, w in other.weights.items():
            out[el] = out.get(el, Fraction(0)) + (1 - alpha) * w
        return Measure(self.group, out)

    def to_json(self) -> dict:
        from .rationals import fmt_q

        return {
            self.group.format_element(el): fmt_q(w)
            for el, w in self.weights.items()
        }

    @classmethod
    def from_json(cls, group: Group, obj: Mapping) -> "Measure":
        from .rationals import parse_q

        return cls(
            group,
            {group.parse_element(k): parse_q(v) for k, v in obj.items()},
        )

    def __repr__(self):
        parts = ", ".join(f"{el!r}: {w}" for el, w in self.weights.items())
        return f"Measure({{{parts}}})"


# spec-level operation aliases

def multiply(g: Element, h: Element) -> Element:
    return g * h


def inverse(g: Element) -> Element:
    return g.inverse()


def convolve(mu: Measure, nu: Measure) -> Measure:
    return mu.convolve(nu)


def measure_of_set(nu: Measure, membership) -> Fraction:
    return nu.of_set(membership)


def evaluate_function(nu: Measure, f) -> Fraction:
    return nu.of_function(f)

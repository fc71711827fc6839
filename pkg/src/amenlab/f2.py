"""The rank-2 free group obstruction to a single invariant-measure view.

Working in the free group on ``a, b``, two base sets drive everything:

* ``first``: reduced words whose first letter is ``a`` or ``a^-1``;
* ``high``:  words of positive height (letter weights a: +1, b: -1).

From these, five derived sets (keys used throughout reports and the
five-set LP, in this fixed order):

* ``first_or_low``   = first  union      complement(high)
* ``first_and_high`` = first  intersect  high
* ``rest_or_high``   = complement(first) union     high
* ``rest_and_low``   = complement(first) intersect complement(high)
* ``high``

Each of the five admits almost-invariant finitely supported measures in
isolation, yet no single measure treats all five almost invariantly:
powers of ``a`` and ``b`` translate the derived sets disjointly, which
forces every candidate measure's mass to vanish.  The module verifies
the combinatorial identities behind that argument pointwise on word-
length truncations (exact predicates make truncation sound: reports say
"verified up to length L", never more), and finitizes the conclusion as
an LP over measures supported in a ball: for each derived set ``E`` and
each translate ``w`` in {a^k, b^k : k < K}, require
``|nu(w^-1 E) - nu(E)| <= delta``.  For small ``delta`` the LP is
infeasible with a Farkas certificate; the crossover threshold is located
by bisection and recorded as a discovered fixture, with no tightness
claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .groups import CapExceeded, Element, FreeGroup, Measure, ball
from .linprog import (
    EQ,
    FeasibilityOutcome,
    GE,
    LE,
    LinearSystem,
    solve_feasibility,
    verify_certificate,
)
from .pictures import SetSpec, height
from .rationals import fmt_q, parse_q

_F0 = Fraction(0)
_F1 = Fraction(1)

FIVE_SET_ORDER = (
    "first_or_low",
    "first_and_high",
    "rest_or_high",
    "rest_and_low",
    "high",
)


def f2_group() -> FreeGroup:
    return FreeGroup(["a", "b"])


def first_spec(group: FreeGroup | None = None) -> SetSpec:
    group = group or f2_group()
    name = group.gen_names[0]
    return SetSpec.first_letter([name, name.upper()])


def high_spec(k: int = 0) -> SetSpec:
    return SetSpec.h_above(k)


def five_set_specs(group: FreeGroup | None = None) -> dict[str, SetSpec]:
    group = group or f2_group()
    first = first_spec(group)
    high = high_spec(0)
    rest = SetSpec.complement(first)
    low = SetSpec.complement(high)
    return {
        "first_or_low": SetSpec.union([first, low]),
        "first_and_high": SetSpec.intersection([first, high]),
        "rest_or_high": SetSpec.union([rest, high]),
        "rest_and_low": SetSpec.intersection([rest, low]),
        "high": high,
    }


MAX_SCAN_LENGTH = 12


@dataclass
class IdentityCheck:
    name: str
    checked: int
    failures: int

    @property
    def ok(self) -> bool:
        return self.failures == 0


@dataclass
class IdentityReport:
    max_length: int
    checks: list[IdentityCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "max_length": self.max_length,
            "note": f"verified pointwise on all words of length <= {self.max_length}",
            "checks": [
                {"name": c.name, "checked": c.checked, "failures": c.failures}
                for c in self.checks
            ],
            "ok": self.ok,
        }


def verify_identities(max_length: int, *, translate_radius: int = 3) -> IdentityReport:
    """Pointwise identity checks on every word of length <= max_length.

    Covered: the two symmetric-difference identities expressing
    first △ low and rest △ high through the two intersection sets, the
    four containments threading the five sets, and the translation law
    ``w * high = (height > height(w))`` for all w in the translate ball
    against all words of length <= max_length - translate_radius.
    """
    if max_length > MAX_SCAN_LENGTH:
        raise CapExceeded(f"scan capped at length {MAX_SCAN_LENGTH}")
    group = f2_group()
    words = ball(group, max_length)
    first = first_spec(group).compile(group)
    high = high_spec(0).compile(group)
    sets = {k: s.compile(group) for k, s in five_set_specs(group).items()}
    report = IdentityReport(max_length)

    def run(name, predicate, pool):
        failures = sum(0 if predicate(u) else 1 for u in pool)
        report.checks.append(IdentityCheck(name, len(pool), failures))

    run(
        "first_xor_low_is_two_cores",
        lambda u: (first(u) ^ (not high(u)))
        == (sets["first_and_high"](u) or sets["rest_and_low"](u)),
        words,
    )
    run(
        "rest_xor_high_is_two_cores",
        lambda u: ((not first(u)) ^ high(u))
        == (sets["first_and_high"](u) or sets["rest_and_low"](u)),
        words,
    )
    run(
        "first_and_high_inside_high",
        lambda u: not sets["first_and_high"](u) or high(u),
        words,
    )
    run(
        "high_inside_rest_or_high",
        lambda u: not high(u) or sets["rest_or_high"](u),
        words,
    )
    run(
        "rest_and_low_inside_low",
        lambda u: not sets["rest_and_low"](u) or not high(u),
        words,
    )
    run(
        "low_inside_first_or_low",
        lambda u: high(u) or sets["first_or_low"](u),
        words,
    )

    inner = ball(group, max(0, max_length - translate_radius))
    translators = ball(group, translate_radius)
    failures = 0
    checked = 0
    for w in translators:
        hw = height(w)
        winv = w.inverse()
        for u in inner:
            checked += 1
            if high(winv * u) != (height(u) > hw):
                failures += 1
    report.checks.append(IdentityCheck("translate_high_is_level_shift", checked, failures))
    return report


@dataclass
class DisjointnessReport:
    translate_count: int
    max_length: int
    checks: list[IdentityCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "translate_count": self.translate_count,
            "max_length": self.max_length,
            "note": f"pairwise disjointness scanned on words of length <= {self.max_length}",
            "checks": [
                {"name": c.name, "checked": c.checked, "failures": c.failures}
                for c in self.checks
            ],
            "ok": self.ok,
        }


def verify_disjoint_translates(translate_count: int, max_length: int) -> DisjointnessReport:
    """Each of the four translate sequences is pairwise disjoint on the scan.

    Scanned families: a^k(rest_and_low), b^k(first_and_high), b^k(first),
    a^k(rest) for k < translate_count.  A word lies in at most one member
    of each sequence; the scan counts memberships of w^-1 * u directly.
    """
    if translate_count > 8:
        raise CapExceeded("translate count capped at 8")
    if max_length > MAX_SCAN_LENGTH:
        raise CapExceeded(f"scan capped at length {MAX_SCAN_LENGTH}")
    group = f2_group()
    a, b = group.generators()
    words = ball(group, max_length)
    sets = {k: s.compile(group) for k, s in five_set_specs(group).items()}
    first = first_spec(group).compile(group)
    a_inv_pows = [(a ** (-k)) for k in range(translate_count)]
    b_inv_pows = [(b ** (-k)) for k in range(translate_count)]
    families = [
        ("a_pow_rest_and_low", a_inv_pows, sets["rest_and_low"]),
        ("b_pow_first_and_high", b_inv_pows, sets["first_and_high"]),
        ("b_pow_first", b_inv_pows, first),
        ("a_pow_rest", a_inv_pows, lambda u: not first(u)),
    ]
    report = DisjointnessReport(translate_count, max_length)
    for name, powers, member in families:
        failures = 0
        for u in words:
            hits = 0
            for p in powers:
                if member(p * u):
                    hits += 1
                    if hits > 1:
                        failures += 1
                        break
        report.checks.append(IdentityCheck(name, len(words), failures))
    return report


def invariance_translates(group: FreeGroup, translate_count: int) -> list[Element]:
    """{a^k, b^k : 1 <= k < K} in scan order (identity rows are vacuous)."""
    a, b = group.generators()
    out = [a**k for k in range(1, translate_count)]
    out += [b**k for k in range(1, translate_count)]
    return out


def invariance_system(
    translate_count: int, delta, radius: int
) -> tuple[LinearSystem, tuple[Element, ...]]:
    """The full five-set invariance LP over measures supported in a ball.

    Variables are the ball elements in canonical order.  Row order
    (relied on by certificate verification): the normalization row, then
    for each derived set in FIVE_SET_ORDER and each translate w in
    `invariance_translates` order, the <= delta row followed by the
    >= -delta row for ``nu(w^-1 E) - nu(E)``.
    """
    delta = Fraction(delta)
    group = f2_group()
    columns = ball(group, radius)
    sets = five_set_specs(group)
    tests = {k: s.compile(group) for k, s in sets.items()}
    translates = invariance_translates(group, translate_count)
    rows = [(tuple([_F1] * len(columns)), EQ, _F1)]
    for key in FIVE_SET_ORDER:
        test = tests[key]
        for w in translates:
            coeffs = tuple(
                Fraction(int(test(w * x)) - int(test(x))) for x in columns
            )
            rows.append((coeffs, LE, delta))
            rows.append((coeffs, GE, -delta))
    return LinearSystem(len(columns), rows, nonneg=True), columns


@dataclass
class InvarianceOutcome:
    translate_count: int
    delta: Fraction
    radius: int
    feasible: bool
    measure: Measure | None
    farkas: tuple[Fraction, ...] | None

    def to_json(self) -> dict:
        out = {
            "K": self.translate_count,
            "delta": fmt_q(self.delta),
            "radius": self.radius,
            "status": "feasible" if self.feasible else "infeasible",
        }
        if self.measure is not None:
            out["measure"] = self.measure.to_json()
        if self.farkas is not None:
            out["farkas"] = [fmt_q(x) for x in self.farkas]
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "InvarianceOutcome":
        group = f2_group()
        measure = None
        farkas = None
        if "measure" in obj:
            measure = Measure.from_json(group, obj["measure"])
        if "farkas" in obj:
            farkas = tuple(parse_q(x) for x in obj["farkas"])
        return cls(
            int(obj["K"]),
            parse_q(obj["delta"]),
            int(obj["radius"]),
            obj["status"] == "feasible",
            measure,
            farkas,
        )


def simultaneous_invariance(
    translate_count: int, delta, radius: int, *, ball_cap: int = 2000
) -> InvarianceOutcome:
    """Decide the five-set invariance LP, with exact certificates.

    Ball elements with identical membership profiles across all
    (set, translate) pairs have identical LP columns, so they are merged
    onto their canonical-least representative before solving; the rows
    are untouched, which keeps Farkas multipliers valid for the full
    system, and feasible points expand by placing each merged weight on
    the representative.
    """
    delta = Fraction(delta)
    if translate_count < 2:
        raise ValueError("need at least two translates")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    group = f2_group()
    columns = ball(group, radius, cap=ball_cap)
    if delta >= 1:
        # every constraint has the form |p - q| <= delta with p, q in [0,1]
        out = InvarianceOutcome(
            translate_count, delta, radius, True,
            Measure.point_mass(group.identity()), None,
        )
        if not verify_invariance_outcome(out):
            raise RuntimeError("internal error: vacuous-delta outcome rejected")
        return out
    sets = five_set_specs(group)
    tests = [sets[k].compile(group) for k in FIVE_SET_ORDER]
    translates = [group.identity()] + invariance_translates(group, translate_count)
    classes: dict[tuple, int] = {}
    reps: list[Element] = []
    profiles: list[tuple] = []
    for x in columns:
        profile = tuple(
            test(w * x) for test in tests for w in translates
        )
        idx = classes.get(profile)
        if idx is None:
            classes[profile] = len(reps)
            reps.append(x)
            profiles.append(profile)
    nclasses = len(reps)
    translate_index = {w: i for i, w in enumerate(translates)}
    rows = [(tuple([_F1] * nclasses), EQ, _F1)]
    for set_i in range(len(FIVE_SET_ORDER)):
        base = set_i * len(translates)
        for w in invariance_translates(group, translate_count):
            wi = translate_index[w]
            coeffs = tuple(
                Fraction(int(profiles[c][base + wi]) - int(profiles[c][base]))
                for c in range(nclasses)
            )
            rows.append((coeffs, LE, delta))
            rows.append((coeffs, GE, -delta))
    outcome = solve_feasibility(LinearSystem(nclasses, rows, nonneg=True))
    if outcome.feasible:
        weights = {rep: w for rep, w in zip(reps, outcome.point) if w}
        result = InvarianceOutcome(
            translate_count, delta, radius, True, Measure(group, weights), None
        )
    else:
        result = InvarianceOutcome(
            translate_count, delta, radius, False, None, tuple(outcome.farkas)
        )
    if not verify_invariance_outcome(result):
        raise RuntimeError("internal error: invariance outcome failed verification")
    return result


def verify_invariance_outcome(outcome: InvarianceOutcome) -> bool:
    """Recheck against the full system; no aggregation trusted.

    Feasible outcomes are checked directly through the membership
    predicates; infeasible ones rebuild the full LP and validate the
    Farkas multipliers row by row.
    """
    group = f2_group()
    if outcome.feasible:
        nu = outcome.measure
        if nu is None:
            return False
        pool = set(ball(group, outcome.radius))
        if set(nu.support()) - pool:
            return False
        sets = five_set_specs(group)
        for key in FIVE_SET_ORDER:
            test = sets[key].compile(group)
            base = nu.of_set(test)
            for w in invariance_translates(group, outcome.translate_count):
                shifted = nu.of_set(lambda x, _w=w, _t=test: _t(_w * x))
                if abs(shifted - base) > outcome.delta:
                    return False
        return True
    if outcome.farkas is None:
        return False
    system, _ = invariance_system(outcome.translate_count, outcome.delta, outcome.radius)
    return verify_certificate(system, FeasibilityOutcome(False, farkas=outcome.farkas))


@dataclass
class ThresholdReport:
    translate_count: int
    radius: int
    delta_infeasible: Fraction
    delta_feasible: Fraction
    infeasible_outcome: InvarianceOutcome
    feasible_outcome: InvarianceOutcome
    probes: list[tuple[Fraction, bool]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "K": self.translate_count,
            "radius": self.radius,
            "delta_infeasible": fmt_q(self.delta_infeasible),
            "delta_feasible": fmt_q(self.delta_feasible),
            "note": "bracket discovered by bisection; no tightness claimed",
            "probes": [[fmt_q(d), feas] for d, feas in self.probes],
            "infeasible_outcome": self.infeasible_outcome.to_json(),
            "feasible_outcome": self.feasible_outcome.to_json(),
        }


def threshold_search(
    translate_count: int,
    radius: int,
    *,
    lo=Fraction(1, 100),
    hi=Fraction(1),
    steps: int = 6,
) -> ThresholdReport:
    """Bisect the invariance-error threshold between infeasible and feasible.

    ``lo`` must be infeasible and ``hi`` feasible; after ``steps``
    bisections the bracket endpoints, with their certificates, are the
    discovered fixture.
    """
    lo = Fraction(lo)
    hi = Fraction(hi)
    lo_out = simultaneous_invariance(translate_count, lo, radius)
    if lo_out.feasible:
        raise ValueError(f"delta={lo} is already feasible; lower the bracket")
    hi_out = simultaneous_invariance(translate_count, hi, radius)
    if not hi_out.feasible:
        raise ValueError(f"delta={hi} is infeasible; raise the bracket")
    probes = [(lo, False), (hi, True)]
    for _ in range(steps):
        mid = (lo + hi) / 2
        mid_out = simultaneous_invariance(translate_count, mid, radius)
        probes.append((mid, mid_out.feasible))
        if mid_out.feasible:
            hi, hi_out = mid, mid_out
        else:
            lo, lo_out = mid, mid_out
    return ThresholdReport(translate_count, radius, lo, hi, lo_out, hi_out, probes)

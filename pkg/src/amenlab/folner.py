"""Folner sets, Folner functions, and their weighted (measure) analogues.

A finite set ``B`` is eps-Folner for a window ``A`` when the total
boundary count ``sum over a in A of |aB △ B|`` is at most ``eps * |B|``.
The Folner function of a generated group takes ``k`` to the least
cardinality of a ``1/k``-Folner set with respect to the generating set.

The weighted analogue replaces sets by probability measures: the optimal
invariance defect ``min over nu of sum over g in ball(m) of the l1 norm
of (g nu - nu)``, with the support constrained so window translates stay
inside ``ball(n)``.  A measure with small defect always contains an
eps-Folner set among its weight level sets (layer-cake extraction), and
`inequality_harness` cross-checks the function-level inequalities that
connect all of these quantities to the averaging (Ramsey) functions.

Folner-function search is exhaustive only over a user-supplied window of
translate-normalized candidates (the identity is the canonical-least
member; finite-table groups, whose index order is not translation
invariant, only require membership of the identity).  Results carry an
``exact`` flag: a value is exact when the window provably contains an
optimal normalized set, and an upper bound otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .groups import (
    CapExceeded,
    CyclicGroup,
    Element,
    FreeAbelianGroup,
    Group,
    Measure,
    TableGroup,
    ball,
    sort_elements,
    translate_set,
)
from .linprog import EQ, GE, LE, LinearSystem, minimize
from .rationals import fmt_q
from .ramsey import ramsey_function, interior

_F0 = Fraction(0)
_F1 = Fraction(1)

MAX_WINDOW_CANDIDATES = 1 << 24
# keeps default weighted solves at desk scale; pass lp_cap for more
DEFAULT_WEIGHTED_LP_CAP = 600


@dataclass
class FolnerReport:
    window: tuple[Element, ...]
    bset: tuple[Element, ...]
    per_generator: list[tuple[Element, int]]
    total: int
    threshold: Fraction  # eps * |B|
    ok: bool

    def to_json(self) -> dict:
        return {
            "window": [repr(a) for a in self.window],
            "bset": [repr(b) for b in self.bset],
            "per_generator": [[repr(a), c] for a, c in self.per_generator],
            "total": self.total,
            "threshold": fmt_q(self.threshold),
            "ok": self.ok,
        }


def is_epsilon_folner(window: Iterable[Element], bset: Iterable[Element], eps) -> FolnerReport:
    """Exact boundary counts and the verdict total <= eps * |B|."""
    eps = Fraction(eps)
    window = tuple(sort_elements(window))
    bpool = frozenset(bset)
    if not bpool:
        raise ValueError("Folner checks need a nonempty candidate set")
    per = []
    total = 0
    for a in window:
        moved = translate_set(a, bpool)
        count = len(moved ^ bpool)
        per.append((a, count))
        total += count
    threshold = eps * len(bpool)
    return FolnerReport(
        window, tuple(sort_elements(bpool)), per, total, threshold, total <= threshold
    )


@dataclass
class FolnerFunctionResult:
    k: int
    size: int | None
    witness: tuple[Element, ...] | None
    exact: bool
    note: str
    candidates_checked: int

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "size": self.size,
            "witness": None if self.witness is None else [repr(x) for x in self.witness],
            "exact": self.exact,
            "note": self.note,
            "candidates_checked": self.candidates_checked,
        }


def _normalized_pool(group: Group, window: Sequence[Element]):
    """Candidate elements allowed to join the identity in a normalized set."""
    e = group.identity()
    if isinstance(group, TableGroup):
        # index order is not translation invariant; only pin membership of e
        return [w for w in window if w != e]
    ekey = e.key()
    return [w for w in window if w.key() > ekey]


def folner_function(
    group: Group,
    k: int,
    window: Iterable[Element],
    *,
    max_candidates: int = MAX_WINDOW_CANDIDATES,
) -> FolnerFunctionResult:
    """Minimum size of a 1/k-Folner set among normalized window subsets.

    Deterministic tie-breaking: smallest size first, then the first hit
    in lexicographic combination order over the canonically sorted pool.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    eps = Fraction(1, k)
    gens = group.generators()
    e = group.identity()
    window = tuple(sort_elements(set(window) | {e}))
    pool = _normalized_pool(group, window)
    if 2 ** len(pool) > max_candidates:
        raise CapExceeded(
            f"window admits 2^{len(pool)} candidates, beyond the {max_candidates} cap"
        )
    checked = 0
    for size in range(1, len(pool) + 2):
        for extra in combinations(pool, size - 1):
            checked += 1
            candidate = frozenset((e,) + extra)
            report = is_epsilon_folner(gens, candidate, eps)
            if report.ok:
                witness = tuple(sort_elements(candidate))
                exact, note = _exactness(group, k, size, window)
                return FolnerFunctionResult(k, size, witness, exact, note, checked)
    return FolnerFunctionResult(
        k, None, None, False, "no Folner set inside the window", checked
    )


def _exactness(group: Group, k: int, size: int, window) -> tuple[bool, str]:
    if isinstance(group, (CyclicGroup, TableGroup)):
        if len(window) == group.order:
            return True, "window covers the whole finite group"
        return False, "window is a proper subset of the finite group"
    if isinstance(group, FreeAbelianGroup) and group.rank == 1:
        if size == 2 * k:
            return True, "matches the shift-boundary lower bound 2k"
        return False, "exceeds the shift-boundary lower bound; window may be too small"
    return False, "search window is not provably exhaustive for this group"


def invariance_defect(nu: Measure, window: Iterable[Element]) -> Fraction:
    """sum over g in window of the l1 distance between g*nu and nu."""
    total = _F0
    for g in window:
        moved = {g * x: w for x, w in nu.weights.items()}
        keys = set(moved) | set(nu.weights)
        total += sum(
            (abs(moved.get(x, _F0) - nu.weights.get(x, _F0)) for x in keys), _F0
        )
    return total


@dataclass
class WeightedFolnerValue:
    m: int
    n: int
    value: Fraction | None  # None when no admissible measure exists
    measure: Measure | None
    status: str  # "ok" | "no_admissible"

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "value": None if self.value is None else fmt_q(self.value),
            "measure": None if self.measure is None else self.measure.to_json(),
            "status": self.status,
        }


def weighted_folner(
    group: Group, m: int, n: int, *, lp_cap: int = DEFAULT_WEIGHTED_LP_CAP
) -> WeightedFolnerValue:
    """Optimal invariance defect over measures admissible for (ball m, ball n).

    One exact LP with an auxiliary variable per (generator-ball element,
    affected point) pair linearizing the l1 norms.
    """
    window = ball(group, m)
    bset = ball(group, n)
    C = interior(window, bset)
    if not C:
        return WeightedFolnerValue(m, n, None, None, "no_admissible")
    cpos = {c: i for i, c in enumerate(C)}
    nc = len(C)
    movers = [g for g in window if g != group.identity()]
    terms = []  # (g, x) pairs with t-variables
    for g in movers:
        affected = sorted(set(C) | translate_set(g, C), key=lambda x: x.key())
        for x in affected:
            terms.append((g, x))
    nvars = nc + len(terms)
    if nvars > lp_cap:
        raise CapExceeded(f"weighted Folner LP has {nvars} variables, beyond {lp_cap}")
    rows = [(tuple([_F1] * nc + [_F0] * len(terms)), EQ, _F1)]
    for t_idx, (g, x) in enumerate(terms):
        coeffs = [_F0] * nvars
        src = cpos.get(g.inverse() * x)  # (g nu)(x) = nu(g^{-1} x)
        dst = cpos.get(x)
        if src is not None:
            coeffs[src] = _F1
        if dst is not None:
            coeffs[dst] -= _F1
        tcol = nc + t_idx
        up = list(coeffs)
        up[tcol] = Fraction(-1)
        rows.append((tuple(up), LE, _F0))
        dn = list(coeffs)
        dn[tcol] = _F1
        rows.append((tuple(dn), GE, _F0))
    objective = (tuple([_F0] * nc + [_F1] * len(terms)), "min")
    opt = minimize(LinearSystem(nvars, rows, objective, nonneg=True))
    weights = {c: w for c, w in zip(C, opt.point[:nc]) if w}
    nu = Measure(group, weights)
    value = invariance_defect(nu, window)
    if value != opt.value:
        raise RuntimeError("internal error: defect recomputation mismatch")
    return WeightedFolnerValue(m, n, opt.value, nu, "ok")


@dataclass
class WeightedFolnerFunction:
    m: int
    eps: Fraction
    n_max: int
    value: int | None
    per_n: list[tuple[int, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "eps": fmt_q(self.eps),
            "n_max": self.n_max,
            "value": self.value,
            "per_n": [{"n": n, "status": s} for n, s in self.per_n],
        }


def weighted_folner_function(
    group: Group, m: int, eps, n_max: int, *, lp_cap: int = DEFAULT_WEIGHTED_LP_CAP
) -> WeightedFolnerFunction:
    """Least n <= n_max whose optimal defect is <= eps, with per-n records."""
    eps = Fraction(eps)
    per_n: list[tuple[int, str]] = []
    for n in range(0, n_max + 1):
        try:
            cell = weighted_folner(group, m, n, lp_cap=lp_cap)
        except CapExceeded:
            per_n.append((n, "cap_exceeded"))
            continue
        if cell.status != "ok":
            per_n.append((n, "no_admissible"))
            continue
        if cell.value <= eps:
            per_n.append((n, "achieved"))
            return WeightedFolnerFunction(m, eps, n_max, n, per_n)
        per_n.append((n, "above"))
    return WeightedFolnerFunction(m, eps, n_max, None, per_n)


def folner_from_weighted(nu: Measure, window: Iterable[Element], eps) -> frozenset[Element]:
    """Extract an eps-Folner level set from a measure with defect <= eps.

    Layer-cake: the defect is the threshold-weighted sum of level-set
    boundary counts while the total mass is the weighted sum of level-set
    sizes, so not every level set can be above threshold.
    """
    eps = Fraction(eps)
    window = tuple(sort_elements(window))
    defect = invariance_defect(nu, window)
    if defect > eps:
        raise ValueError(f"measure has defect {defect} > eps {eps}")
    thresholds = sorted(set(nu.weights.values()), reverse=True)
    for t in thresholds:
        level = frozenset(x for x, w in nu.weights.items() if w >= t)
        if is_epsilon_folner(window, level, eps).ok:
            return level
    raise RuntimeError("internal error: no Folner level set; layer-cake violated")


@dataclass
class HarnessInstance:
    name: str
    params: dict
    lhs: object
    rhs: object
    status: str  # "holds" | "violated" | "untested"
    note: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "lhs": repr(self.lhs),
            "rhs": repr(self.rhs),
            "status": self.status,
            "note": self.note,
        }


@dataclass
class HarnessReport:
    group: dict
    instances: list[HarnessInstance]

    @property
    def violated(self) -> list[HarnessInstance]:
        return [i for i in self.instances if i.status == "violated"]

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "instances": [i.to_json() for i in self.instances],
            "all_hold": not self.violated,
        }


def _iterated_ramsey(group, m, times, *, n_max, cap):
    """R applied `times` times starting from radius m, 1/2 gap each step."""
    radius = m
    for _ in range(times):
        step = ramsey_function(group, radius, Fraction(1, 2), n_max, cap=cap)
        if step.value is None:
            return None
        radius = step.value
    return radius


def inequality_harness(
    group: Group,
    m_values: Sequence[int],
    k_values: Sequence[int],
    *,
    window_radius: int = 6,
    n_max: int = 8,
    ramsey_cap: int = 14,
) -> HarnessReport:
    """Compute both sides of the comparison inequalities on small instances.

    Quantities that exceed their caps are reported as untested, never as
    failures; any genuinely violated instance is a build-breaking event
    surfaced through `HarnessReport.violated`.
    """
    s = len(group.generators())
    instances: list[HarnessInstance] = []

    fol_values: dict[int, int | None] = {}
    for k in k_values:
        res = folner_function(group, k, ball(group, window_radius))
        fol_values[k] = res.size if res.exact else None
        if res.size is not None and not res.exact:
            instances.append(
                HarnessInstance(
                    "folner_exactness",
                    {"k": k},
                    res.size,
                    None,
                    "untested",
                    "window value is only an upper bound",
                )
            )

    for m in m_values:
        for k in k_values:
            eps = Fraction(1, k)
            rr = ramsey_function(group, m, eps, n_max, cap=ramsey_cap)
            ww = weighted_folner_function(group, m, eps, n_max)
            if rr.value is None or ww.value is None:
                instances.append(
                    HarnessInstance(
                        "ramsey_le_weighted",
                        {"m": m, "eps": fmt_q(eps)},
                        rr.value,
                        ww.value,
                        "untested",
                        "a side exhausted its search bound",
                    )
                )
            else:
                instances.append(
                    HarnessInstance(
                        "ramsey_le_weighted",
                        {"m": m, "eps": fmt_q(eps)},
                        rr.value,
                        ww.value,
                        "holds" if rr.value <= ww.value else "violated",
                    )
                )

    for k in k_values:
        eps = Fraction(1, k)
        fol = fol_values.get(k)
        ww = weighted_folner_function(group, 1, eps, n_max)
        if fol is None or ww.value is None:
            instances.append(
                HarnessInstance(
                    "folner_le_exp_weighted",
                    {"k": k},
                    fol,
                    None if ww.value is None else (2 * s + 1) ** ww.value,
                    "untested",
                    "needs an exact Folner value and an achieved weighted level",
                )
            )
        else:
            rhs = (2 * s + 1) ** ww.value
            instances.append(
                HarnessInstance(
                    "folner_le_exp_weighted",
                    {"k": k},
                    fol,
                    rhs,
                    "holds" if fol <= rhs else "violated",
                )
            )

    for k in k_values:
        # p-fold averaging with (3/4)^p < 1/(2ks)
        target = Fraction(1, 2 * k * s)
        p = 1
        power = Fraction(3, 4)
        while power >= target:
            power *= Fraction(3, 4)
            p += 1
        fol = fol_values.get(k)
        iterated = _iterated_ramsey(group, 1, p * s, n_max=n_max, cap=ramsey_cap)
        if fol is None or iterated is None:
            instances.append(
                HarnessInstance(
                    "folner_le_exp_iterated_ramsey",
                    {"k": k, "p": p},
                    fol,
                    None if iterated is None else (2 * s + 1) ** iterated,
                    "untested",
                    "iterated averaging radius exceeded its caps",
                )
            )
        else:
            rhs = (2 * s + 1) ** iterated
            instances.append(
                HarnessInstance(
                    "folner_le_exp_iterated_ramsey",
                    {"k": k, "p": p},
                    fol,
                    rhs,
                    "holds" if fol <= rhs else "violated",
                )
            )

    for m in m_values:
        # weighted level at doubled gap vs iterated averaging: with
        # (3/4)^p < eps, F(m, 2*eps*s) <= R^{s*p}(m)
        eps = Fraction(1, 2)
        p = 1
        power = Fraction(3, 4)
        while power >= eps:
            power *= Fraction(3, 4)
            p += 1
        ww = weighted_folner_function(group, m, 2 * eps * s, n_max)
        iterated = _iterated_ramsey(group, m, s * p, n_max=n_max, cap=ramsey_cap)
        if ww.value is None or iterated is None:
            instances.append(
                HarnessInstance(
                    "weighted_le_iterated_ramsey",
                    {"m": m, "eps": fmt_q(eps)},
                    ww.value,
                    iterated,
                    "untested",
                    "a side exhausted its search bound",
                )
            )
        else:
            instances.append(
                HarnessInstance(
                    "weighted_le_iterated_ramsey",
                    {"m": m, "eps": fmt_q(eps)},
                    ww.value,
                    iterated,
                    "holds" if ww.value <= iterated else "violated",
                )
            )

    return HarnessReport(group.to_json(), instances)

"""Averaging windows: deciding eps-Ramsey sets and building their measures.

A finite set ``B`` is eps-Ramsey with respect to a window ``A`` when for
every ``E subset of B`` there is a probability measure ``nu`` whose
window translates all stay inside ``B`` (equivalently: the support lies
in the interior ``C = {b in B : A*b subset of B}``) and whose translated
measures of ``E`` pairwise differ by at most eps.

Two independent decision routes are implemented and must agree:

* direct:   for each ``E`` solve the LP over ``nu in P(C)`` with the
            pairwise gap constraints;
* pictures: for each ``E`` test eps-balancedness of the picture family
            ``{ {a in A : a*c in E} : c in C }`` via the balance module.

Only subsets of ``A*C`` are enumerated: a picture depends on ``E``
through ``E ∩ A*C`` alone, so every other subset of ``B`` is equivalent
to one of these.  Subsets are numbered by bitmask over the canonical
order of ``A*C`` and a failing verdict reports the least failing mask.

The module also houses the constructive gap reductions: turning a
1/2-Ramsey witness for the binary level set of ``f`` into a measure with
f-gap at most 3/4, and boosting that single step through a tower of
windows to reach any positive gap (the verified contraction is (3/4)^n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .balance import (
    BalanceWitness,
    SetFamily,
    deficiency_system,
    is_epsilon_balanced,
    verify_balance_witness,
)
from .groups import (
    CapExceeded,
    Element,
    Group,
    Measure,
    ball,
    sort_elements,
)
from .linprog import (
    EQ,
    GE,
    LE,
    FeasibilityOutcome,
    LinearSystem,
    Optimum,
    minimize,
    outcome_from_json,
    solve_feasibility,
    verify_certificate,
)
from .rationals import fmt_q, parse_q

_F0 = Fraction(0)
_F1 = Fraction(1)

DEFAULT_ENUMERATION_CAP = 24
BOOST_STEP_GAP = Fraction(3, 4)


def interior(window: Iterable[Element], bset: Iterable[Element]) -> tuple[Element, ...]:
    """C = {b in B : a*b in B for every a in A}, canonically ordered.

    Measures supported in C are exactly those whose window translates
    stay supported in B.  C may be empty.
    """
    bpool = frozenset(bset)
    window = tuple(window)
    out = []
    for b in bpool:
        if all(a * b in bpool for a in window):
            out.append(b)
    return tuple(sort_elements(out))


def _column_masks(
    prod_pos: list[list[int]], e_mask: int, width: int
) -> list[int]:
    """Per-interior-point picture masks over the window, for one E."""
    cols = []
    for positions in prod_pos:
        mask = 0
        for i in range(width):
            if e_mask >> positions[i] & 1:
                mask |= 1 << i
        cols.append(mask)
    return cols


def direct_gap_system(
    width: int, cols: Sequence[int], eps: Fraction
) -> LinearSystem:
    """The direct-method LP for one E, encoded by its picture columns.

    Variables are the interior weights.  Row order (relied on by
    verification): the normalization row, then for each window pair
    (i, j), i < j, the <= eps row followed by the >= -eps row; pairs
    whose coefficient rows vanish are kept for stable indexing.
    """
    nc = len(cols)
    rows = [(tuple([_F1] * nc), EQ, _F1)]
    for i in range(width):
        for j in range(i + 1, width):
            coeffs = tuple(
                Fraction((col >> i & 1) - (col >> j & 1)) for col in cols
            )
            rows.append((coeffs, LE, eps))
            rows.append((coeffs, GE, -eps))
    return LinearSystem(nc, rows, nonneg=True)


@dataclass(frozen=True)
class RamseyCounterexample:
    e_mask: int
    elements: tuple[Element, ...]
    kind: str  # "direct_farkas" | "balance_optimum" | "empty_interior"
    payload: dict

    def to_json(self) -> dict:
        return {
            "E_mask": self.e_mask,
            "E": [repr(x) for x in self.elements],
            "kind": self.kind,
            "payload": self.payload,
        }


@dataclass
class RamseyVerdict:
    """Outcome of one eps-Ramsey decision, with verifiable evidence."""

    is_ramsey: bool
    eps: Fraction
    method: str
    window: tuple[Element, ...]
    bset: tuple[Element, ...]
    interior: tuple[Element, ...]
    products: tuple[Element, ...]  # A*C in canonical order; E's live here
    reason: str | None = None
    witnesses: dict[int, Measure] | None = None  # E mask -> measure
    family_witnesses: list[tuple[SetFamily, BalanceWitness]] | None = None
    counterexample: RamseyCounterexample | None = None
    subsets_checked: int = 0

    def to_json(self) -> dict:
        out = {
            "is_ramsey": self.is_ramsey,
            "eps": fmt_q(self.eps),
            "method": self.method,
            "window": [repr(x) for x in self.window],
            "bset": [repr(x) for x in self.bset],
            "interior": [repr(x) for x in self.interior],
            "products": [repr(x) for x in self.products],
            "subsets_checked": self.subsets_checked,
        }
        if self.reason:
            out["reason"] = self.reason
        if self.witnesses is not None:
            out["witnesses"] = {
                str(mask): nu.to_json() for mask, nu in sorted(self.witnesses.items())
            }
        if self.family_witnesses is not None:
            out["family_witnesses"] = [
                {"family": fam.to_json(), "witness": w.to_json()}
                for fam, w in self.family_witnesses
            ]
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        return out


def _mask_elements(products: Sequence[Element], mask: int) -> tuple[Element, ...]:
    return tuple(x for i, x in enumerate(products) if mask >> i & 1)


def is_epsilon_ramsey(
    window: Iterable[Element],
    bset: Iterable[Element],
    eps,
    *,
    method: str = "direct",
    cap: int = DEFAULT_ENUMERATION_CAP,
    collect_witnesses: bool | None = None,
) -> RamseyVerdict:
    """Decide eps-Ramseyness of B with respect to the window A.

    Enumerates every subset of A*C (bitmask order) and reports either
    witnesses for all of them or the least failing subset with an exact
    infeasibility certificate.  ``method`` selects the decision route;
    both produce identical verdicts.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be >= 0")
    if method not in ("direct", "pictures"):
        raise ValueError("method must be 'direct' or 'pictures'")
    window = tuple(sort_elements(window))
    bset_t = tuple(sort_elements(bset))
    group = window[0].group
    C = interior(window, bset_t)
    if not C:
        return RamseyVerdict(
            False,
            eps,
            method,
            window,
            bset_t,
            C,
            (),
            reason="empty_interior",
            counterexample=RamseyCounterexample(0, (), "empty_interior", {}),
        )
    products = tuple(sort_elements({a * c for a in window for c in C}))
    k = len(products)
    if k > cap:
        raise CapExceeded(f"|A*C| = {k} exceeds enumeration cap {cap}")
    pos = {x: i for i, x in enumerate(products)}
    width = len(window)
    prod_pos = [[pos[a * c] for a in window] for c in C]

    if collect_witnesses is None:
        collect_witnesses = (1 << k) <= 4096

    witnesses: dict[int, Measure] | None = {} if (collect_witnesses and method == "direct") else None
    families_seen: dict[frozenset[int], tuple[bool, BalanceWitness | None]] = {}
    direct_memo: dict[tuple[int, ...], tuple] = {}
    counterexample = None
    checked = 0

    for e_mask in range(1 << k):
        checked += 1
        cols = _column_masks(prod_pos, e_mask, width)
        if method == "pictures":
            key = frozenset(cols)
            hit = families_seen.get(key)
            if hit is None:
                family = SetFamily(window, key)
                hit = is_epsilon_balanced(family, eps)
                families_seen[key] = hit
            ok, _ = hit
            if not ok:
                family = SetFamily(window, key)
                _, optimum = _deficiency_certificate(family)
                counterexample = RamseyCounterexample(
                    e_mask,
                    _mask_elements(products, e_mask),
                    "balance_optimum",
                    {
                        "family": family.to_json(),
                        "optimum": optimum.to_json(),
                    },
                )
                break
        else:
            key = tuple(sorted(cols))
            hit = direct_memo.get(key)
            if hit is None:
                system = direct_gap_system(width, key, eps)
                outcome = solve_feasibility(system)
                if outcome.feasible:
                    agg: dict[int, Fraction] = {}
                    for col, w in zip(key, outcome.point):
                        if w:
                            agg[col] = agg.get(col, _F0) + w
                    hit = (True, agg)
                else:
                    hit = (False, outcome.farkas)
                direct_memo[key] = hit
            feasible, payload = hit
            if feasible:
                nu_weights: dict[Element, Fraction] = {}
                assigned = dict(payload)
                for c_el, col in zip(C, cols):
                    w = assigned.pop(col, None)
                    if w:
                        nu_weights[c_el] = nu_weights.get(c_el, _F0) + w
                nu = Measure(group, nu_weights)
                if not _verify_gap(window, nu, products, e_mask, eps):
                    raise RuntimeError("internal error: remapped witness failed")
                if witnesses is not None:
                    witnesses[e_mask] = nu
            else:
                system = direct_gap_system(width, cols, eps)
                cert = FeasibilityOutcome(False, farkas=payload)
                if not verify_certificate(system, cert):
                    raise RuntimeError("internal error: remapped Farkas failed")
                counterexample = RamseyCounterexample(
                    e_mask,
                    _mask_elements(products, e_mask),
                    "direct_farkas",
                    {"farkas": [fmt_q(x) for x in payload]},
                )
                break

    if counterexample is not None:
        return RamseyVerdict(
            False,
            eps,
            method,
            window,
            bset_t,
            C,
            products,
            witnesses=None,
            counterexample=counterexample,
            subsets_checked=checked,
        )
    family_witnesses = None
    if method == "pictures":
        family_witnesses = [
            (SetFamily(window, key), wit)
            for key, (ok, wit) in sorted(
                families_seen.items(), key=lambda kv: sorted(kv[0])
            )
        ]
    return RamseyVerdict(
        True,
        eps,
        method,
        window,
        bset_t,
        C,
        products,
        witnesses=witnesses,
        family_witnesses=family_witnesses,
        subsets_checked=checked,
    )


def _deficiency_certificate(family: SetFamily) -> tuple[LinearSystem, Optimum]:
    system = deficiency_system(family)
    return system, minimize(system)


def _verify_gap(
    window: Sequence[Element],
    nu: Measure,
    products: Sequence[Element],
    e_mask: int,
    eps: Fraction,
) -> bool:
    pos = {x: i for i, x in enumerate(products)}
    vals = []
    for a in window:
        total = _F0
        for c_el, w in nu.weights.items():
            p = pos.get(a * c_el)
            if p is not None and e_mask >> p & 1:
                total += w
        vals.append(total)
    return max(vals) - min(vals) <= eps


def verify_ramsey_verdict(verdict: RamseyVerdict) -> bool:
    """Recheck a verdict's stored evidence without re-running the search."""
    window = verdict.window
    C = interior(window, verdict.bset)
    if tuple(C) != tuple(verdict.interior):
        return False
    if verdict.reason == "empty_interior":
        return not C and not verdict.is_ramsey
    products = tuple(sort_elements({a * c for a in window for c in C}))
    if products != tuple(verdict.products):
        return False
    if verdict.is_ramsey:
        if verdict.witnesses is not None:
            for e_mask, nu in verdict.witnesses.items():
                if set(nu.support()) - set(C):
                    return False
                if not _verify_gap(window, nu, products, e_mask, verdict.eps):
                    return False
        if verdict.family_witnesses is not None:
            for family, wit in verdict.family_witnesses:
                if not verify_balance_witness(family, wit, verdict.eps):
                    return False
        return True
    ce = verdict.counterexample
    if ce is None:
        return False
    if ce.kind == "direct_farkas":
        width = len(window)
        pos = {x: i for i, x in enumerate(products)}
        prod_pos = [[pos[a * c] for a in window] for c in C]
        cols = _column_masks(prod_pos, ce.e_mask, width)
        system = direct_gap_system(width, cols, verdict.eps)
        farkas = tuple(parse_q(x) for x in ce.payload["farkas"])
        return verify_certificate(system, FeasibilityOutcome(False, farkas=farkas))
    if ce.kind == "balance_optimum":
        family = SetFamily.from_json(ce.payload["family"])
        system = deficiency_system(family)
        optimum = outcome_from_json(ce.payload["optimum"])
        if not verify_certificate(system, optimum):
            return False
        return optimum.value > verdict.eps
    return False


def subset_measure(
    window: Sequence[Element],
    bset: Sequence[Element],
    e_elements: Iterable[Element],
    eps=Fraction(1, 2),
) -> Measure | None:
    """A measure with E-gap <= eps for one specific E, or None.

    The single-subset slice of the eps-Ramsey property; only the part of
    E inside A*C matters, and the 1/2 default is all the boosting
    construction ever needs from a window.
    """
    eps = Fraction(eps)
    window = tuple(sort_elements(window))
    C = interior(window, bset)
    if not C:
        return None
    epool = frozenset(e_elements)
    width = len(window)
    cols = []
    for c in C:
        mask = 0
        for i, a in enumerate(window):
            if a * c in epool:
                mask |= 1 << i
        cols.append(mask)
    system = direct_gap_system(width, cols, eps)
    outcome = solve_feasibility(system)
    if not outcome.feasible:
        return None
    group = window[0].group
    weights = {c: w for c, w in zip(C, outcome.point) if w}
    return Measure(group, weights)


def _f_gap(window: Sequence[Element], nu: Measure, f: Callable) -> Fraction:
    """max over window pairs of |a nu(f) - a' nu(f)|, computed exactly."""
    vals = []
    for a in window:
        total = _F0
        for c, w in nu.weights.items():
            total += w * Fraction(f(a * c))
        vals.append(total)
    return max(vals) - min(vals)


def binary_to_unit(
    window: Sequence[Element],
    bset: Sequence[Element],
    f: Mapping[Element, Fraction] | Callable[[Element], Fraction],
) -> Measure:
    """From the 1/2-Ramsey witness of the level set {f >= 1/2} to an
    f-gap of at most 3/4.

    ``f`` must take values in [0,1] on B.  The returned measure is the
    witness for the induced binary set; splitting f as
    (1/2)*chi_E + (f - (1/2)*chi_E) bounds its gap by 1/4 + 1/2, and the
    bound is verified exactly before returning.
    """
    bset_t = tuple(sort_elements(bset))
    get = f if callable(f) else f.__getitem__
    fvals = {}
    for b in bset_t:
        v = Fraction(get(b))
        if not 0 <= v <= 1:
            raise ValueError("f must map B into [0,1]")
        fvals[b] = v
    e_elements = frozenset(b for b, v in fvals.items() if v >= Fraction(1, 2))
    nu = subset_measure(window, bset_t, e_elements)
    if nu is None:
        raise ValueError("B is not 1/2-Ramsey w.r.t. the window for the level set of f")
    gap = _f_gap(tuple(sort_elements(window)), nu, lambda g: fvals[g])
    if gap > BOOST_STEP_GAP:
        raise RuntimeError("internal error: single-step gap bound violated")
    return nu


@dataclass
class BoostStep:
    window: tuple[Element, ...]
    next_window: tuple[Element, ...]
    measure: Measure
    tail_gap: Fraction  # verified gap of the composed tail over `window`


@dataclass
class BoostResult:
    measure: Measure
    steps: list[BoostStep]
    final_gap: Fraction
    target_eps: Fraction

    def to_json(self) -> dict:
        return {
            "steps": [
                {
                    "window_size": len(s.window),
                    "next_window_size": len(s.next_window),
                    "measure": s.measure.to_json(),
                    "tail_gap": fmt_q(s.tail_gap),
                }
                for s in self.steps
            ],
            "measure": self.measure.to_json(),
            "final_gap": fmt_q(self.final_gap),
            "eps": fmt_q(self.target_eps),
        }


def boost_steps_needed(eps: Fraction) -> int:
    """Least n with (3/4)^n <= eps."""
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    n = 0
    power = _F1
    while power > eps:
        power *= BOOST_STEP_GAP
        n += 1
    return n


class BoostStepError(Exception):
    """A boost level could not produce its single-step measure."""

    def __init__(self, step: int, message: str):
        super().__init__(f"boost step {step}: {message}")
        self.step = step


def ball_step_oracle(group: Group, *, radius_cap: int = 64, bumps: Sequence[int] = ()):
    """The default single-step oracle: enclosing windows are metric balls.

    Given the current window, returns the next window (the smallest ball
    with at least doubled radius, optionally bumped per level) together
    with a solver that turns a [0,1] rational function on that window
    into a measure with gap at most 3/4, via `binary_to_unit`.
    """
    bumps = tuple(bumps)

    def oracle(current: tuple[Element, ...], level: int):
        radius = 0
        pool = set(current)
        while not pool <= set(ball(group, radius)):
            radius += 1
            if radius > radius_cap:
                raise BoostStepError(level, "window is not contained in a small ball")
        next_radius = max(2 * radius, radius + 1)
        if level < len(bumps):
            next_radius += bumps[level]
        if next_radius > radius_cap:
            raise CapExceeded("boost tower exceeded the radius cap")
        next_window = tuple(ball(group, next_radius))

        def solver(f_map):
            try:
                return binary_to_unit(current, next_window, f_map)
            except ValueError as exc:
                raise BoostStepError(level, str(exc)) from None

        return next_window, solver

    return oracle


def _run_tower(window, f, eps, n, oracle) -> BoostResult:
    group = window[0].group
    towers = [window]
    solvers = []
    for level in range(n):
        current = towers[-1]
        next_window, solver = oracle(current, level)
        pool = set(next_window)
        if not set(current) <= pool:
            raise BoostStepError(level, "oracle window does not contain the current one")
        if any((x * y) not in pool for x in current for y in current):
            raise BoostStepError(level, "oracle window misses a pairwise product")
        towers.append(tuple(sort_elements(next_window)))
        solvers.append(solver)
    measures: list[Measure | None] = [None] * n
    # downward recursion: tail(g) = g nu_{i+1} ... nu_{n-1} (f)
    for i in range(n - 1, -1, -1):
        tail = _compose_tail(measures[i + 1 :], f)
        dom = towers[i + 1]
        tail_vals = {g: tail(g) for g in dom}
        lo = min(tail_vals.values())
        scale = BOOST_STEP_GAP ** (n - i - 1)
        f_i = {g: (v - lo) / scale for g, v in tail_vals.items()}
        if any(not 0 <= v <= 1 for v in f_i.values()):
            raise RuntimeError("internal error: rescaled tail left [0,1]")
        measures[i] = solvers[i](f_i)
    steps = []
    total = Measure.point_mass(group.identity())
    for i in range(n - 1, -1, -1):
        total = measures[i].convolve(total)
        tail_gap = _f_gap(towers[i], total, f)
        bound = BOOST_STEP_GAP ** (n - i)
        if tail_gap > bound:
            raise RuntimeError("internal error: contraction bound violated")
        steps.append(BoostStep(towers[i], towers[i + 1], measures[i], tail_gap))
    steps.reverse()
    final_gap = _f_gap(window, total, f)
    if final_gap > eps:
        raise RuntimeError("internal error: boosted gap exceeds eps")
    return BoostResult(total, steps, final_gap, eps)


def boost(
    window: Iterable[Element],
    f: Callable[[Element], Fraction],
    eps,
    *,
    step_oracle=None,
    max_steps: int | None = None,
    radius_cap: int = 64,
    attempt_cap: int = 50,
) -> BoostResult:
    """Compose single-step measures until the f-gap over the window is <= eps.

    ``step_oracle(current_window, level)`` must return the next enclosing
    window (which has to contain the current window and its pairwise
    products) and a solver mapping a [0,1] rational function on that
    window to a measure with single-step gap at most 3/4; failures
    surface as `BoostStepError` carrying the step index.  Without an
    oracle the default ball tower is used: at least doubling radii, and
    on a failed level the corresponding radius is bumped and the descent
    restarts.  All gap bounds, per step and final, are verified exactly.
    """
    eps = Fraction(eps)
    window = tuple(sort_elements(window))
    if not window:
        raise ValueError("window must be nonempty")
    group = window[0].group
    n = boost_steps_needed(eps)
    if max_steps is not None and n > max_steps:
        raise ValueError(f"need {n} steps for eps={eps}, but max_steps={max_steps}")
    if step_oracle is not None:
        return _run_tower(window, f, eps, n, step_oracle)
    bumps = [0] * n
    for _attempt in range(attempt_cap):
        oracle = ball_step_oracle(group, radius_cap=radius_cap, bumps=bumps)
        try:
            return _run_tower(window, f, eps, n, oracle)
        except BoostStepError as exc:
            bumps[exc.step] += 1
    raise CapExceeded("boost failed to find workable windows within the attempt cap")


def _compose_tail(measures: Sequence[Measure], f: Callable) -> Callable:
    chain = [m for m in measures if m is not None]
    if not chain:
        return lambda g: Fraction(f(g))
    rho = chain[0]
    for m in chain[1:]:
        rho = rho.convolve(m)

    def tail(g, _rho=rho, _f=f):
        total = _F0
        for c, w in _rho.weights.items():
            total += w * Fraction(_f(g * c))
        return total

    return tail


@dataclass
class RamseyFunctionResult:
    m: int
    eps: Fraction
    n_max: int
    value: int | None
    status: str  # "found" | "exhausted"
    per_n: list[tuple[int, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "eps": fmt_q(self.eps),
            "n_max": self.n_max,
            "value": self.value,
            "status": self.status,
            "per_n": [{"n": n, "verdict": v} for n, v in self.per_n],
        }


def ramsey_function(
    group: Group,
    m: int,
    eps,
    n_max: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
    method: str = "pictures",
) -> RamseyFunctionResult:
    """Least n <= n_max with ball(n) eps-Ramsey w.r.t. ball(m), else exhausted.

    Radii where the enumeration cap is exceeded are recorded as
    "cap_exceeded" and do not count as negative verdicts.
    """
    eps = Fraction(eps)
    window = ball(group, m)
    per_n: list[tuple[int, str]] = []
    for n in range(0, n_max + 1):
        bset = ball(group, n)
        try:
            verdict = is_epsilon_ramsey(
                window, bset, eps, method=method, cap=cap, collect_witnesses=False
            )
        except CapExceeded:
            per_n.append((n, "cap_exceeded"))
            continue
        if verdict.is_ramsey:
            per_n.append((n, "ramsey"))
            return RamseyFunctionResult(m, eps, n_max, n, "found", per_n)
        per_n.append((n, "not_ramsey"))
    return RamseyFunctionResult(m, eps, n_max, None, "exhausted", per_n)

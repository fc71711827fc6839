"""Solver-independent feasibility oracle used to cross-check the simplex.

Feasibility is decided by enumerating candidate active sets: a polyhedron
is nonempty exactly when some subset of at most `n` inequality rows,
turned into equalities together with all equality rows, has a solution
set that is entirely contained in the polyhedron (the minimal-face
criterion).  Everything is exact Gaussian elimination over Fractions; no
pivoting rule or tableau is shared with the solver under test.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from amenlab.linprog import EQ, GE, LE, LinearSystem

_F0 = Fraction(0)


def rref_solve(eqs, n):
    """Solve a rational linear equation system.

    Returns None when inconsistent, else (particular solution with free
    variables set to 0, nullspace basis vectors).
    """
    M = [[Fraction(c) for c in coeffs] + [Fraction(rhs)] for coeffs, rhs in eqs]
    pivot_cols = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(M)) if M[i][c]), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivot_cols.append(c)
        r += 1
        if r == len(M):
            break
    for i in range(r, len(M)):
        if M[i][n]:
            return None
    x0 = [_F0] * n
    for i, c in enumerate(pivot_cols):
        x0[c] = M[i][n]
    free_cols = [c for c in range(n) if c not in pivot_cols]
    null_basis = []
    for f in free_cols:
        v = [_F0] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivot_cols):
            v[c] = -M[i][f]
        null_basis.append(v)
    return x0, null_basis


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v) if a), _F0)


def oracle_feasible(system: LinearSystem) -> bool:
    """Minimal-face enumeration over all inequality sub-bases of size <= n."""
    n = system.num_vars
    eq_rows = [(list(r.coeffs), r.rhs) for r in system.rows if r.rel == EQ]
    ineq = []
    for r in system.rows:
        if r.rel == LE:
            ineq.append((list(r.coeffs), r.rhs))
        elif r.rel == GE:
            ineq.append(([-c for c in r.coeffs], -r.rhs))
    for j, flag in enumerate(system.nonneg):
        if flag:
            v = [_F0] * n
            v[j] = Fraction(-1)
            ineq.append((v, _F0))
    for size in range(0, n + 1):
        for T in combinations(range(len(ineq)), size):
            sol = rref_solve(eq_rows + [ineq[t] for t in T], n)
            if sol is None:
                continue
            x0, null_basis = sol
            contained = True
            for g, h in ineq:
                if any(_dot(g, v) for v in null_basis) or _dot(g, x0) > h:
                    contained = False
                    break
            if contained:
                return True
    return False


def random_system(rng: random.Random, max_vars: int = 6, max_rows: int = 10) -> LinearSystem:
    """Small random system with coefficients in {-3..3}."""
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_rows)
    rows = []
    for _ in range(m):
        coeffs = [rng.randint(-3, 3) for _ in range(n)]
        rel = rng.choice([LE, EQ, GE])
        rows.append((coeffs, rel, rng.randint(-3, 3)))
    nonneg = [rng.random() < 0.5 for _ in range(n)]
    return LinearSystem(n, rows, nonneg=nonneg)

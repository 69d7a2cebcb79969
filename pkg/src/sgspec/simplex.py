"""Exact phase-1/phase-2 simplex over rationals for small box-constrained LPs.

Solves  min c.x  s.t.  A x = b,  lo <= x <= hi  with Fraction arithmetic,
so feasibility verdicts at the boundary of sign intervals are exact.
A full tableau is maintained (O(m n) per pivot) and Bland's rule is used
throughout, which guarantees termination.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__ = ["LPResult", "solve_lp", "feasible"]

ZERO = Fraction(0)
ONE = Fraction(1)


class LPResult:
    __slots__ = ("status", "x", "objective")

    def __init__(self, status: str, x: list[Fraction] | None, objective: Fraction | None):
        self.status = status  # "optimal" | "infeasible" | "unbounded"
        self.x = x
        self.objective = objective


def solve_lp(
    a: Sequence[Sequence],
    b: Sequence,
    c: Sequence,
    lo: Sequence,
    hi: Sequence,
) -> LPResult:
    """Minimize c.x subject to A x = b and lo <= x <= hi, exactly.

    All bounds must be finite. Returns an LPResult whose ``x`` is a list
    of Fractions when status is "optimal". Fixed columns (lo == hi) are
    substituted out and singleton rows propagated before the simplex runs;
    in the systems this package builds that usually leaves a tiny core.
    """
    a = [[Fraction(v) for v in row] for row in a]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    lo = [Fraction(v) for v in lo]
    hi = [Fraction(v) for v in hi]
    m, n = len(a), len(c)

    # Presolve.
    fixed: list[Fraction | None] = [None] * n
    active = [True] * m
    changed = True
    while changed:
        changed = False
        for j in range(n):
            if fixed[j] is None and lo[j] == hi[j]:
                fixed[j] = lo[j]
                if fixed[j] != 0:
                    for i in range(m):
                        if a[i][j] != 0:
                            b[i] -= a[i][j] * fixed[j]
                changed = True
        for j in range(n):
            if fixed[j] is None and lo[j] > hi[j]:
                return LPResult("infeasible", None, None)
        for i in range(m):
            if not active[i]:
                continue
            nz = [j for j in range(n) if fixed[j] is None and a[i][j] != 0]
            if not nz:
                if b[i] != 0:
                    return LPResult("infeasible", None, None)
                active[i] = False
                changed = True
            elif len(nz) == 1:
                j = nz[0]
                val = b[i] / a[i][j]
                if val < lo[j] or val > hi[j]:
                    return LPResult("infeasible", None, None)
                lo[j] = hi[j] = val
                active[i] = False
                changed = True

    cols = [j for j in range(n) if fixed[j] is None]
    rows = [i for i in range(m) if active[i]]
    # Columns untouched by any remaining row: bound minimizing the objective.
    in_rows = {j for i in rows for j in cols if a[i][j] != 0}
    for j in cols:
        if j not in in_rows:
            fixed[j] = hi[j] if c[j] < 0 else lo[j]
    cols = [j for j in cols if fixed[j] is None]

    if not cols:
        x = [fixed[j] for j in range(n)]
        return LPResult("optimal", x, sum((c[j] * x[j] for j in range(n)), ZERO))

    status, xcore = _simplex_core(
        [[a[i][j] for j in cols] for i in rows],
        [b[i] for i in rows],
        [c[j] for j in cols],
        [lo[j] for j in cols],
        [hi[j] for j in cols],
    )
    if status != "optimal":
        return LPResult(status, None, None)
    x = list(fixed)
    for j, v in zip(cols, xcore):
        x[j] = v
    return LPResult("optimal", x, sum((c[j] * x[j] for j in range(n)), ZERO))


def _simplex_core(a, b, c, lo, hi):
    """Tableau simplex on the presolved system; returns (status, x)."""
    m, n = len(a), len(c)
    for j in range(n):
        if lo[j] > hi[j]:
            return "infeasible", None

    # Shift to y = x - lo so 0 <= y <= u.
    u = [hi[j] - lo[j] for j in range(n)]
    b = [b[i] - sum(a[i][j] * lo[j] for j in range(n)) for i in range(m)]

    # Phase 1: artificial variable per row, flipped so rhs >= 0.
    for i in range(m):
        if b[i] < 0:
            b[i] = -b[i]
            a[i] = [-v for v in a[i]]
    n_tot = n + m
    tab = [a[i] + [ONE if k == i else ZERO for k in range(m)] for i in range(m)]
    tab_u = u + [max(b) + ONE if b else ONE] * m
    basis = list(range(n, n_tot))
    in_basis = [False] * n + [True] * m
    at_upper = [False] * n_tot
    xval = [ZERO] * n_tot
    for i in range(m):
        xval[basis[i]] = b[i]

    def reduced_costs(obj: list[Fraction]) -> list[Fraction]:
        red = obj[:]
        for i in range(m):
            cb = obj[basis[i]]
            if cb != 0:
                row = tab[i]
                for j in range(n_tot):
                    if row[j] != 0:
                        red[j] -= cb * row[j]
        return red

    def run(obj: list[Fraction]) -> None:
        """Bounded-variable tableau simplex with Bland's rule."""
        red = reduced_costs(obj)
        while True:
            entering = -1
            direction = 0
            for j in range(n_tot):
                if in_basis[j]:
                    continue
                if not at_upper[j] and red[j] < 0:
                    entering, direction = j, +1
                    break
                if at_upper[j] and red[j] > 0:
                    entering, direction = j, -1
                    break
            if entering < 0:
                return
            # Ratio test with bounds; tie-break on smallest basis index.
            limit = tab_u[entering]  # bound-to-bound flip
            leave = -1
            leave_to_upper = False
            for i in range(m):
                delta = tab[i][entering] * direction
                xb = xval[basis[i]]
                if delta > 0:
                    t = xb / delta
                    hit_upper = False
                elif delta < 0:
                    t = (tab_u[basis[i]] - xb) / (-delta)
                    hit_upper = True
                else:
                    continue
                if t < limit or (t == limit and leave >= 0 and basis[i] < basis[leave]):
                    limit, leave, leave_to_upper = t, i, hit_upper
            if limit > 0:
                for i in range(m):
                    if tab[i][entering] != 0:
                        xval[basis[i]] -= tab[i][entering] * direction * limit
                xval[entering] += direction * limit
            if leave < 0:
                at_upper[entering] = not at_upper[entering]
                continue
            # Pivot: entering replaces basis[leave].
            out = basis[leave]
            at_upper[out] = leave_to_upper
            in_basis[out] = False
            in_basis[entering] = True
            basis[leave] = entering
            prow = tab[leave]
            piv = prow[entering]
            if piv != ONE:
                inv = ONE / piv
                tab[leave] = prow = [v * inv for v in prow]
            for i in range(m):
                if i == leave:
                    continue
                factor = tab[i][entering]
                if factor != 0:
                    row = tab[i]
                    tab[i] = [row[j] - factor * prow[j] for j in range(n_tot)]
            factor = red[entering]
            if factor != 0:
                red = [red[j] - factor * prow[j] for j in range(n_tot)]

    run([ZERO] * n + [ONE] * m)
    if any(xval[j] != 0 for j in range(n, n_tot)):
        return "infeasible", None
    # Pin artificials at zero for phase 2.
    for j in range(n, n_tot):
        tab_u[j] = ZERO
    run(c + [ZERO] * m)
    return "optimal", [xval[j] + lo[j] for j in range(n)]


def feasible(a, b, lo, hi) -> LPResult:
    """Feasibility check: any x with A x = b, lo <= x <= hi."""
    n = len(lo)
    return solve_lp(a, b, [ZERO] * n, lo, hi)

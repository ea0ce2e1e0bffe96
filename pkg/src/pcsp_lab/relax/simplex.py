"""Exact two-phase simplex over the rationals.

Rows are kept sparse as ``{column: q}`` dicts, where ``q`` is gmpy2's ``mpq``
when available and ``Fraction`` otherwise; both are exact.  The solver works on
``A x = b, x >= 0`` plus optional upper bounds, each bound becoming an explicit
row with its own slack column unless an equality row already implies it.

Entering columns are priced by largest reduced cost; after
``DEGENERATE_LIMIT`` consecutive degenerate pivots the solver switches to
Bland's smallest-index rule, which cannot cycle.  ``rule="bland"`` uses
Bland's rule throughout.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional, Sequence

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

Row = dict[int, Fraction]


def to_fraction(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def implied_bounds(rows: Sequence[Mapping[int, Fraction]], rhs: Sequence[Fraction],
                   upper: Mapping[int, Fraction]) -> set[int]:
    """Columns whose upper bound follows from a row with non-negative coefficients."""
    best: dict[int, Fraction] = {}
    for row, r in zip(rows, rhs):
        if r < 0 or any(v < 0 for v in row.values()):
            continue
        for j, v in row.items():
            if v > 0:
                lim = Fraction(r) / Fraction(v)
                if j not in best or lim < best[j]:
                    best[j] = lim
    return {j for j, u in upper.items() if j in best and best[j] <= u}


class Unbounded(Exception):
    pass


class Simplex:
    """Feasibility and maximisation over ``{x : A x = b, 0 <= x, x_v <= u_v}``.

    After construction ``feasible`` tells whether the polytope is non-empty;
    :meth:`maximize` then re-optimises from the current basis, so consecutive
    objectives warm-start.
    """

    DEGENERATE_LIMIT = 50

    def __init__(self, n: int, rows: Sequence[Mapping[int, Fraction]], rhs: Sequence[Fraction],
                 upper: Optional[Mapping[int, Fraction]] = None, drop_implied: bool = True,
                 rule: str = "dantzig"):
        if rule not in ("dantzig", "bland"):
            raise ValueError(f"unknown pivot rule {rule!r}")
        self.rule = rule
        self.pivots = 0
        self.n = n
        upper = dict(upper or {})
        if drop_implied:
            for j in implied_bounds(rows, rhs, upper):
                del upper[j]
        cols = n + len(upper)
        tab: list[Row] = []
        b: list[Fraction] = []
        for row, r in zip(rows, rhs):
            row = {j: Q(v) for j, v in row.items() if v}
            r = Q(r)
            if r < 0:
                row = {j: -v for j, v in row.items()}
                r = -r
            tab.append(row)
            b.append(r)
        for s, (v, u) in enumerate(sorted(upper.items())):
            tab.append({v: Q(1), n + s: Q(1)})
            b.append(Q(u))
        self.cols = cols
        self.rows = tab
        self.rhs = b
        self.feasible = self._phase_one()

    # -- core pivoting ---------------------------------------------------------
    def _pivot(self, r: int, j: int, obj: Optional[Row]) -> None:
        prow = self.rows[r]
        p = prow[j]
        if p != 1:
            inv = 1 / p
            prow = {c: v * inv for c, v in prow.items()}
            self.rows[r] = prow
            self.rhs[r] *= inv
        br = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row.get(j)
            if not f:
                continue
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            self.rhs[i] -= f * br
        if obj is not None:
            f = obj.get(j)
            if f:
                for c, v in prow.items():
                    nv = obj.get(c, 0) - f * v
                    if nv:
                        obj[c] = nv
                    else:
                        obj.pop(c, None)
                obj[-1] = obj.get(-1, 0) - f * br
        self.basis[r] = j

    def _run(self, obj: Row, allowed: int) -> None:
        """Maximise; ``obj`` holds reduced costs and ``obj[-1]`` the current value.

        Pricing is largest-coefficient until ``DEGENERATE_LIMIT`` consecutive
        pivots fail to move the objective; from then on Bland's smallest-index
        rule is used, which cannot cycle.  ``rule="bland"`` uses Bland throughout.
        """
        bland = self.rule == "bland"
        stall = 0
        while True:
            cand = [(v, c) for c, v in obj.items() if 0 <= c < allowed and v < 0]
            if not cand:
                return
            entering = min(c for _, c in cand) if bland else min(cand)[1]
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is not None and a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded()
            if best[0][0] == 0:
                stall += 1
                if stall >= self.DEGENERATE_LIMIT:
                    bland = True
            else:
                stall = 0
                bland = self.rule == "bland"
            self.pivots += 1
            self._pivot(best[1], entering, obj)

    def _objective_row(self, c: Mapping[int, Fraction]) -> Row:
        obj: Row = {}
        for j, v in c.items():
            if v:
                obj[j] = -Q(v)
        val = Q(0)
        for i, row in enumerate(self.rows):
            cb = c.get(self.basis[i], 0)
            if not cb:
                continue
            for j, v in row.items():
                nv = obj.get(j, 0) + cb * v
                if nv:
                    obj[j] = nv
                else:
                    obj.pop(j, None)
            val += cb * self.rhs[i]
        obj[-1] = val
        return obj

    def _phase_one(self) -> bool:
        m = len(self.rows)
        art0 = self.cols
        self.basis = []
        for i in range(m):
            self.rows[i][art0 + i] = Q(1)
            self.basis.append(art0 + i)
        c = {art0 + i: Q(-1) for i in range(m)}
        obj = self._objective_row(c)
        self._run(obj, art0 + m)
        if obj.get(-1, 0) != 0:  # optimum of -(sum of artificials) is below zero
            return False
        # drive remaining artificials out of the basis, dropping redundant rows
        keep = []
        for i in range(m):
            if self.basis[i] >= art0:
                j = next((c for c in sorted(self.rows[i]) if c < art0), None)
                if j is None:
                    continue
                self._pivot(i, j, None)
            keep.append(i)
        self.rows = [{c: v for c, v in self.rows[i].items() if c < art0} for i in keep]
        self.rhs = [self.rhs[i] for i in keep]
        self.basis = [self.basis[i] for i in keep]
        return True

    # -- public --------------------------------------------------------------
    def point(self) -> list[Fraction]:
        x = [Fraction(0)] * self.n
        for i, j in enumerate(self.basis):
            if j < self.n:
                x[j] = to_fraction(self.rhs[i])
        return x

    def maximize(self, c: Mapping[int, Fraction]) -> tuple[Fraction, list[Fraction]]:
        if not self.feasible:
            raise ValueError("maximize on an infeasible polytope")
        obj = self._objective_row(c)
        self._run(obj, self.cols)
        return to_fraction(obj.get(-1, Q(0))), self.point()

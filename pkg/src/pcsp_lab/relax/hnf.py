"""Integer feasibility of ``A x = b`` by column-style Hermite reduction.

Columns are reduced with unimodular operations (tracked in an identity
block appended below ``A``), row by row, until each row has at most one
non-zero among the remaining free columns.  The resulting lower-triangular
system is then solved by forward substitution; a non-integral quotient
means no integer solution exists.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

Column = dict[int, int]


def _axpy(dst: Column, q: int, src: Column) -> None:
    """dst -= q * src, keeping the dict sparse."""
    for r, v in src.items():
        nv = dst.get(r, 0) - q * v
        if nv:
            dst[r] = nv
        else:
            dst.pop(r, None)


def solve_integer(rows: Sequence[Mapping[int, int]], rhs: Sequence[int], n: int) -> Optional[list[int]]:
    """Some integer ``x`` with ``rows @ x == rhs``, or ``None`` if there is none."""
    m = len(rows)
    cols: list[Column] = [{m + c: 1} for c in range(n)]
    for i, row in enumerate(rows):
        for c, v in row.items():
            if v:
                cols[c][i] = int(v)
    active = list(range(n))
    pivots: list[tuple[int, int]] = []  # (row, column)
    for i in range(m):
        cand = [c for c in active if i in cols[c]]
        while len(cand) > 1:
            lead = min(cand, key=lambda c: (abs(cols[c][i]), c))
            lv = cols[lead][i]
            rest = []
            for c in cand:
                if c == lead:
                    continue
                _axpy(cols[c], cols[c][i] // lv, cols[lead])
                if i in cols[c]:
                    rest.append(c)
            cand = [lead] + rest
        if cand:
            p = cand[0]
            if cols[p][i] < 0:
                cols[p] = {r: -v for r, v in cols[p].items()}
            pivots.append((i, p))
            active.remove(p)
    # forward substitution on the triangular part
    y: dict[int, int] = {}
    pivot_of = dict(pivots)
    for i in range(m):
        acc = sum(cols[p].get(i, 0) * yv for p, yv in y.items())
        resid = int(rhs[i]) - acc
        p = pivot_of.get(i)
        if p is None:
            if resid:
                return None
            continue
        q, rem = divmod(resid, cols[p][i])
        if rem:
            return None
        y[p] = q
    x = [0] * n
    for p, yv in y.items():
        for r, v in cols[p].items():
            if r >= m:
                x[r - m] += v * yv
    return x

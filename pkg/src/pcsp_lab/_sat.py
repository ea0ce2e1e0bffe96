"""Tiny DPLL solver for the table searches.

A clause is a tuple of literals ``(var, value)``; it is satisfied when at least
one of its variables takes the listed value.  Branching picks the lowest
unassigned variable and tries 0 before 1, so results are deterministic.
"""

from typing import Iterator, Sequence

Clause = tuple[tuple[int, int], ...]


def solve(n: int, clauses: Sequence[Clause], all_solutions: bool = False) -> Iterator[list[int]]:
    clauses = [c for c in clauses]
    if any(len(c) == 0 for c in clauses):
        return
    occ: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for cid, clause in enumerate(clauses):
        for var, val in clause:
            occ[var].append((cid, val))
    sat = [0] * len(clauses)
    false_cnt = [0] * len(clauses)
    size = [len(c) for c in clauses]
    value = [-1] * n
    trail: list[int] = []

    def assign(var, val):
        """Assign and propagate; returns False on conflict.  Everything
        assigned is pushed on the trail so the caller can undo it."""
        queue = [(var, val)]
        while queue:
            v, x = queue.pop()
            if value[v] != -1:
                if value[v] != x:
                    return False
                continue
            value[v] = x
            trail.append(v)
            for cid, req in occ[v]:
                if req == x:
                    sat[cid] += 1
                    continue
                false_cnt[cid] += 1
                if sat[cid]:
                    continue
                if false_cnt[cid] == size[cid]:
                    return False
                if false_cnt[cid] == size[cid] - 1:
                    for u, y in clauses[cid]:
                        if value[u] == -1:
                            queue.append((u, y))
                            break
        return True

    def undo(mark):
        while len(trail) > mark:
            v = trail.pop()
            x = value[v]
            for cid, req in occ[v]:
                if req == x:
                    sat[cid] -= 1
                else:
                    false_cnt[cid] -= 1
            value[v] = -1

    # unit clauses up front
    for clause in clauses:
        if len(clause) == 1:
            if not assign(*clause[0]):
                return
    # explicit stack of (mark, var, next value to try)
    stack: list[list[int]] = []
    while True:
        try:
            var = value.index(-1)
        except ValueError:
            yield list(value)
            if not all_solutions:
                return
            var = -1
        if var >= 0:
            stack.append([len(trail), var, 0])
        # try next branch
        while stack:
            mark, v, nxt = stack[-1]
            undo(mark)
            if nxt > 1:
                stack.pop()
                continue
            stack[-1][2] = nxt + 1
            if assign(v, nxt):
                break
        else:
            return

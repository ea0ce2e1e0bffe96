"""The BLP and AIP relaxations of a homomorphism instance X -> A, and BLP+AIP."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from ..structures import Relation, RelStructure, check_signature
from .hnf import solve_integer
from .simplex import Simplex

Rational = Fraction
Key = tuple[int, tuple[int, ...], tuple[int, ...]]  # (relation, x-tuple, a-tuple)


class Verdict(str, Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"


@dataclass
class RelaxOutcome:
    verdict: Verdict
    witness: Optional[list] = None
    interior: Optional[list[Fraction]] = None  # BLP point used by BLP+AIP

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPT

    def to_dict(self) -> dict:
        out: dict = {"verdict": self.verdict.value}
        if self.witness is not None:
            out["witness"] = [str(v) for v in self.witness]
        return out


@dataclass
class _System:
    keys: list[Key]
    rows: list[dict[int, int]]
    rhs: list[int]
    unary: int

    @property
    def n(self) -> int:
        return len(self.keys)


@dataclass
class LPProblem(_System):
    """``A lam = b`` with ``0 <= lam <= 1``; ``bounds`` lists the bounded columns."""

    bounds: dict[int, Fraction] = field(default_factory=dict)
    prefix: str = "lam"


@dataclass
class IntSystem(_System):
    """``A tau = b`` over the integers; columns in ``zero`` are fixed to 0."""

    zero: frozenset[int] = frozenset()
    prefix: str = "tau"


# -- construction ------------------------------------------------------------

def augment_unary(X: RelStructure, A: RelStructure) -> tuple[RelStructure, RelStructure, int]:
    check_signature(X, A)
    full_x = frozenset((v,) for v in range(X.domain_size))
    full_a = frozenset((a,) for a in range(A.domain_size))
    for i, (rx, ra) in enumerate(zip(X.relations, A.relations)):
        if rx.arity == 1 and rx.tuples == full_x and ra.tuples == full_a:
            return X, A, i
    Xu = RelStructure(X.domain_size, X.relations + (Relation(1, full_x),), X.variables)
    Au = RelStructure(A.domain_size, A.relations + (Relation(1, full_a),))
    return Xu, Au, len(X.relations)


def _build(X: RelStructure, A: RelStructure, unary: int) -> tuple[list[Key], list[dict[int, int]], list[int]]:
    check_signature(X, A)
    keys: list[Key] = []
    col: dict[Key, int] = {}
    for i, (rx, ra) in enumerate(zip(X.relations, A.relations)):
        atups = ra.sorted()
        for x in rx.sorted():
            for a in atups:
                col[(i, x, a)] = len(keys)
                keys.append((i, x, a))
    rows: list[dict[int, int]] = []
    rhs: list[int] = []
    # mass: each constraint's distribution sums to 1
    for i, (rx, ra) in enumerate(zip(X.relations, A.relations)):
        for x in rx.sorted():
            rows.append({col[(i, x, a)]: 1 for a in ra.sorted()})
            rhs.append(1)
    # marginals agree with the unary variables
    for i, (rx, ra) in enumerate(zip(X.relations, A.relations)):
        if i == unary:
            continue
        atups = ra.sorted()
        for x in rx.sorted():
            for j in range(rx.arity):
                for b in range(A.domain_size):
                    row = {col[(i, x, a)]: 1 for a in atups if a[j] == b}
                    u = col[(unary, (x[j],), (b,))]
                    row[u] = row.get(u, 0) - 1
                    rows.append({c: v for c, v in row.items() if v})
                    rhs.append(0)
    return keys, rows, rhs


def _augmented(X: RelStructure, A: RelStructure) -> tuple[RelStructure, RelStructure, int]:
    check_signature(X, A)
    return augment_unary(X, A)


def blp_build(X: RelStructure, A: RelStructure, unary: Optional[int] = None) -> LPProblem:
    if unary is None:
        X, A, unary = _augmented(X, A)
    keys, rows, rhs = _build(X, A, unary)
    return LPProblem(keys, rows, rhs, unary, bounds={c: Fraction(1) for c in range(len(keys))})


def aip_build(X: RelStructure, A: RelStructure, unary: Optional[int] = None,
              zero: frozenset[int] = frozenset()) -> IntSystem:
    if unary is None:
        X, A, unary = _augmented(X, A)
    keys, rows, rhs = _build(X, A, unary)
    return IntSystem(keys, rows, rhs, unary, zero=frozenset(zero))


# -- checks and text output -------------------------------------------------

def check_lp_point(P: LPProblem, x: Sequence[Fraction]) -> bool:
    if len(x) != P.n or any(v < 0 for v in x):
        return False
    if any(x[c] > u for c, u in P.bounds.items()):
        return False
    return all(sum(v * x[c] for c, v in row.items()) == r for row, r in zip(P.rows, P.rhs))


def check_int_point(S: IntSystem, x: Sequence[int]) -> bool:
    if len(x) != S.n or any(int(v) != v for v in x):
        return False
    if any(x[c] != 0 for c in S.zero):
        return False
    return all(sum(v * x[c] for c, v in row.items()) == r for row, r in zip(S.rows, S.rhs))


def var_name(prefix: str, key: Key) -> str:
    i, x, a = key
    return f"{prefix}[{i}][{','.join(map(str, x))}][{','.join(map(str, a))}]"


def emit_text(P: Union[LPProblem, IntSystem]) -> str:
    """One line per constraint, ``c*name + ... = rhs``, exact integers."""
    lines = []
    names = [var_name(P.prefix, k) for k in P.keys]
    for row, r in zip(P.rows, P.rhs):
        terms = " + ".join(f"{v}*{names[c]}" for c, v in sorted(row.items()))
        lines.append(f"{terms or '0'} = {r}")
    if isinstance(P, LPProblem):
        for c, u in sorted(P.bounds.items()):
            lines.append(f"1*{names[c]} <= {u}")
    else:
        for c in sorted(P.zero):
            lines.append(f"1*{names[c]} = 0")
    return "\n".join(lines) + ("\n" if lines else "")


# -- solvers ----------------------------------------------------------------

def _simplex(P: LPProblem) -> Simplex:
    return Simplex(P.n, P.rows, P.rhs, P.bounds)


def lp_feasible(P: LPProblem) -> RelaxOutcome:
    lp = _simplex(P)
    if not lp.feasible:
        return RelaxOutcome(Verdict.REJECT)
    return RelaxOutcome(Verdict.ACCEPT, lp.point())


def _average(points: list[list[Fraction]], n: int) -> list[Fraction]:
    return [sum((p[j] for p in points), Fraction(0)) / len(points) for j in range(n)]


def relative_interior_point(P: LPProblem, method: str = "batched") -> Optional[list[Fraction]]:
    """A feasible point whose zero set is exactly the set of identically-zero variables.

    ``per_variable`` maximises each coordinate in turn and averages all the
    maximisers.  ``batched`` (default) maximises the sum of the coordinates
    not yet seen positive, until that sum is 0; it needs far fewer LP solves
    and gives the same zero set.
    """
    lp = _simplex(P)
    if not lp.feasible:
        return None
    n = P.n
    if n == 0:
        return []
    if method == "per_variable":
        points = [lp.maximize({v: Fraction(1)})[1] for v in range(n)]
        return _average(points, n)
    if method != "batched":
        raise ValueError(f"unknown method {method!r}")
    points = [lp.point()]
    positive = {j for j, v in enumerate(points[0]) if v > 0}
    while len(positive) < n:
        rest = [j for j in range(n) if j not in positive]
        value, pt = lp.maximize({j: Fraction(1) for j in rest})
        if value == 0:
            break
        points.append(pt)
        positive.update(j for j in rest if pt[j] > 0)
    return _average(points, n)


def int_feasible(S: IntSystem) -> RelaxOutcome:
    keep = [c for c in range(S.n) if c not in S.zero]
    remap = {c: i for i, c in enumerate(keep)}
    rows = [{remap[c]: v for c, v in row.items() if c in remap} for row in S.rows]
    sol = solve_integer(rows, S.rhs, len(keep))
    if sol is None:
        return RelaxOutcome(Verdict.REJECT)
    x = [0] * S.n
    for c, v in zip(keep, sol):
        x[c] = v
    return RelaxOutcome(Verdict.ACCEPT, x)


def aip_decide(X: RelStructure, A: RelStructure) -> RelaxOutcome:
    return int_feasible(aip_build(X, A))


def blp_aip(X: RelStructure, A: RelStructure, method: str = "batched") -> RelaxOutcome:
    Xu, Au, unary = _augmented(X, A)
    P = blp_build(Xu, Au, unary)
    p = relative_interior_point(P, method)
    if p is None:
        return RelaxOutcome(Verdict.REJECT)
    zero = frozenset(j for j, v in enumerate(p) if v == 0)
    out = int_feasible(aip_build(Xu, Au, unary, zero))
    out.interior = p
    return out

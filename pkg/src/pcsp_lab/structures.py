"""Finite relational structures and homomorphisms between them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from . import _config
from .errors import CapacityError, DomainError, SignatureError

Tuple_ = tuple[int, ...]
UnaryMap = Union[Sequence[int], Callable[[int], int]]


@dataclass(frozen=True)
class Relation:
    arity: int
    tuples: frozenset[Tuple_]

    def __post_init__(self):
        if self.arity < 1:
            raise DomainError(f"arity must be positive, got {self.arity}")
        for tup in self.tuples:
            if len(tup) != self.arity:
                raise DomainError(f"tuple {tup} does not have arity {self.arity}")

    @classmethod
    def of(cls, tuples: Iterable[Sequence[int]], arity: Optional[int] = None) -> "Relation":
        tups = frozenset(tuple(int(v) for v in t) for t in tuples)
        if arity is None:
            if not tups:
                raise DomainError("cannot infer the arity of an empty relation")
            arity = len(next(iter(tups)))
        return cls(arity, tups)

    def __len__(self) -> int:
        return len(self.tuples)

    def __contains__(self, tup) -> bool:
        return tuple(tup) in self.tuples

    def __iter__(self) -> Iterator[Tuple_]:
        return iter(self.sorted())

    def sorted(self) -> list[Tuple_]:
        return sorted(self.tuples)

    def as_array(self) -> np.ndarray:
        """Tuples as rows of an ``(len, arity)`` int array, lexicographic order."""
        if not self.tuples:
            return np.zeros((0, self.arity), dtype=np.int64)
        return np.array(self.sorted(), dtype=np.int64)

    def max_value(self) -> int:
        return max((max(t) for t in self.tuples), default=-1)

    def min_value(self) -> int:
        return min((min(t) for t in self.tuples), default=0)

    def issubset(self, other: "Relation") -> bool:
        return self.arity == other.arity and self.tuples <= other.tuples

    def union(self, other: Iterable[Sequence[int]]) -> "Relation":
        return Relation(self.arity, self.tuples | Relation.of(other, self.arity).tuples)

    def difference(self, other: Iterable[Sequence[int]]) -> "Relation":
        return Relation(self.arity, self.tuples - Relation.of(other, self.arity).tuples)

    def to_dict(self) -> dict:
        return {"arity": self.arity, "tuples": [list(t) for t in self.sorted()]}

    @classmethod
    def from_dict(cls, data: dict) -> "Relation":
        return cls.of(data["tuples"], int(data["arity"]))


@dataclass(frozen=True)
class RelStructure:
    domain_size: int
    relations: tuple[Relation, ...]
    variables: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.domain_size < 1:
            raise DomainError("domain_size must be positive")
        object.__setattr__(self, "relations", tuple(self.relations))
        for rel in self.relations:
            if rel.tuples and (rel.min_value() < 0 or rel.max_value() >= self.domain_size):
                raise DomainError(f"relation entries must lie in [0, {self.domain_size})")
        if self.variables is not None:
            object.__setattr__(self, "variables", tuple(self.variables))
            if len(self.variables) != self.domain_size:
                raise DomainError("variables must name every domain element")

    @property
    def signature(self) -> tuple[int, ...]:
        return tuple(r.arity for r in self.relations)

    def compatible(self, other: "RelStructure") -> bool:
        return self.signature == other.signature

    def to_dict(self) -> dict:
        out = {"domain_size": self.domain_size,
               "relations": [r.to_dict() for r in self.relations]}
        if self.variables is not None:
            out["variables"] = list(self.variables)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RelStructure":
        variables = data.get("variables")
        return cls(int(data["domain_size"]),
                   tuple(Relation.from_dict(r) for r in data["relations"]),
                   tuple(variables) if variables is not None else None)


def boolean(*relations: Relation) -> RelStructure:
    return RelStructure(2, tuple(relations))


def check_signature(X: RelStructure, A: RelStructure) -> None:
    if not X.compatible(A):
        raise SignatureError(f"signature mismatch: {X.signature} vs {A.signature}")


def is_homomorphism(phi: Sequence[int], X: RelStructure, A: RelStructure) -> bool:
    check_signature(X, A)
    phi = tuple(int(v) for v in phi)
    if len(phi) != X.domain_size:
        raise DomainError(f"map has length {len(phi)}, expected {X.domain_size}")
    if any(v < 0 or v >= A.domain_size for v in phi):
        raise DomainError("map leaves the target domain")
    for rel_x, rel_a in zip(X.relations, A.relations):
        target = rel_a.tuples
        for tup in rel_x.tuples:
            if tuple(phi[v] for v in tup) not in target:
                return False
    return True


def iter_homomorphisms(X: RelStructure, A: RelStructure) -> Iterator[Tuple_]:
    """Yield every homomorphism X -> A, in the order of the backtracking search.

    Variables are assigned by descending constraint degree (ties by index) and
    values are tried in increasing order; a constraint is checked as soon as
    its whole scope is assigned.
    """
    check_signature(X, A)
    n = X.domain_size
    degree = [0] * n
    constraints = []
    for rel_x, rel_a in zip(X.relations, A.relations):
        for scope in rel_x.sorted():
            constraints.append((scope, rel_a.tuples))
            for v in set(scope):
                degree[v] += 1
    order = sorted(range(n), key=lambda v: (-degree[v], v))
    position = {v: i for i, v in enumerate(order)}
    buckets: list[list] = [[] for _ in range(n)]
    for scope, target in constraints:
        buckets[max(position[v] for v in scope)].append((scope, target))

    values = [-1] * n
    choice = [0] * (n + 1)
    depth = 0
    m = A.domain_size
    while depth >= 0:
        if depth == n:
            yield tuple(values)
            depth -= 1
            continue
        var = order[depth]
        placed = False
        while choice[depth] < m:
            values[var] = choice[depth]
            choice[depth] += 1
            if all(tuple(values[v] for v in scope) in target
                   for scope, target in buckets[depth]):
                placed = True
                break
        if placed:
            depth += 1
        else:
            values[var] = -1
            choice[depth] = 0
            depth -= 1


def find_homomorphism(X: RelStructure, A: RelStructure) -> Optional[Tuple_]:
    return next(iter_homomorphisms(X, A), None)


def brute_force_homomorphisms(X: RelStructure, A: RelStructure) -> list[Tuple_]:
    """All maps X -> A found by plain enumeration; the oracle for the backtracker."""
    check_signature(X, A)
    return [phi for phi in product(range(A.domain_size), repeat=X.domain_size)
            if is_homomorphism(phi, X, A)]


def encode(coords: Sequence[int], base: int) -> int:
    """Mixed-radix index of a power-domain element, most significant first."""
    idx = 0
    for c in coords:
        idx = idx * base + int(c)
    return idx


def decode(idx: int, base: int, m: int) -> Tuple_:
    out = []
    for _ in range(m):
        idx, c = divmod(idx, base)
        out.append(c)
    return tuple(reversed(out))


def power(A: RelStructure, m: int) -> RelStructure:
    """m-th Cartesian power; element (c_1..c_m) is encoded by :func:`encode`."""
    if m < 1:
        raise DomainError("power exponent must be >= 1")
    cap = _config.capacity()
    n = A.domain_size
    if n ** m > cap:
        raise CapacityError(f"power domain {n}^{m} exceeds capacity {cap}")
    weights = n ** np.arange(m - 1, -1, -1, dtype=np.int64)
    rels = []
    for rel in A.relations:
        if len(rel) ** m > cap:
            raise CapacityError(f"power relation {len(rel)}^{m} exceeds capacity {cap}")
        arr = rel.as_array()
        if len(arr) == 0:
            rels.append(Relation(rel.arity, frozenset()))
            continue
        grids = np.indices((len(arr),) * m).reshape(m, -1)  # (m, |R|^m)
        cols = arr[grids]  # (m, |R|^m, arity)
        codes = np.tensordot(weights, cols, axes=(0, 0))  # (|R|^m, arity)
        rels.append(Relation(rel.arity, frozenset(map(tuple, codes.tolist()))))
    return RelStructure(n ** m, tuple(rels))


def _as_callable(f: UnaryMap) -> Callable[[int], int]:
    if callable(f):
        return f
    table = tuple(f)
    return table.__getitem__


def image_of_relation(R: Relation, f: UnaryMap) -> Relation:
    g = _as_callable(f)
    return Relation(R.arity, frozenset(tuple(g(v) for v in tup) for tup in R.tuples))


def is_symmetric(R: Relation) -> bool:
    return all(p in R.tuples for tup in R.tuples for p in permutations(tup))


def largest_symmetric_subrelation(R: Relation) -> Relation:
    keep = set()
    orbit_ok: dict[Tuple_, bool] = {}
    for tup in R.tuples:
        key = tuple(sorted(tup))
        if key not in orbit_ok:
            orbit_ok[key] = all(p in R.tuples for p in set(permutations(tup)))
        if orbit_ok[key]:
            keep.add(tup)
    return Relation(R.arity, frozenset(keep))


def is_homomorphic_relaxation(Ap: RelStructure, Bp: RelStructure,
                              A: RelStructure, B: RelStructure) -> bool:
    """True iff (Ap, Bp) relaxes (A, B): Ap -> A and B -> Bp."""
    for s in (Bp, A, B):
        check_signature(Ap, s)
    return find_homomorphism(Ap, A) is not None and find_homomorphism(B, Bp) is not None

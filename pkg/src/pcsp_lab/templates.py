"""Boolean template families: t-in-k, NAE, odd-in-k, and their S-modified pairs."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import DomainError, ParamError, SpecError, TemplateError
from .structures import Relation, RelStructure, boolean, find_homomorphism


class Mode(str, Enum):
    ADD = "add"
    REMOVE = "remove"


def weight(tup: Sequence[int]) -> int:
    return int(sum(tup))


def t_in_k(t: int, k: int) -> Relation:
    if not 1 <= t < k:
        raise ParamError(f"t-in-k needs 1 <= t < k, got t={t}, k={k}")
    tuples = []
    for ones in combinations(range(k), t):
        tup = [0] * k
        for i in ones:
            tup[i] = 1
        tuples.append(tuple(tup))
    return Relation(k, frozenset(tuples))


def nae(k: int) -> Relation:
    if k < 2:
        raise ParamError(f"NAE needs k >= 2, got {k}")
    return Relation(k, frozenset(p for p in product((0, 1), repeat=k) if 0 < sum(p) < k))


def odd_k(k: int) -> Relation:
    if k < 2:
        raise ParamError(f"odd-in-k needs k >= 2, got {k}")
    return Relation(k, frozenset(p for p in product((0, 1), repeat=k) if sum(p) % 2))


def full_relation(k: int) -> Relation:
    return Relation(k, frozenset(product((0, 1), repeat=k)))


def negate_tuple(tup: Sequence[int]) -> tuple[int, ...]:
    return tuple(1 - v for v in tup)


def negate_relation(R: Relation, domain_size: int = 2) -> Relation:
    if domain_size != 2 or (R.tuples and (R.min_value() < 0 or R.max_value() > 1)):
        raise DomainError("negation is only defined on the Boolean domain")
    return Relation(R.arity, frozenset(negate_tuple(t) for t in R.tuples))


def bitstring(tup: Sequence[int]) -> str:
    return "".join(str(int(v)) for v in tup)


def parse_bitstring(s: str) -> tuple[int, ...]:
    s = s.strip()
    if not s or set(s) - {"0", "1"}:
        raise SpecError(f"not a bitstring: {s!r}")
    return tuple(int(c) for c in s)


@dataclass(frozen=True)
class TemplateSpec:
    """t-in-k with tuples S added (``Mode.ADD``) or NAE with S removed (``Mode.REMOVE``)."""

    t: int
    k: int
    S: tuple[tuple[int, ...], ...]
    mode: Mode = Mode.ADD

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        # canonical order keeps JSON output reproducible
        object.__setattr__(self, "S", tuple(sorted({tuple(int(v) for v in x) for x in self.S})))

    def validate(self, require_nonempty: bool = False) -> "TemplateSpec":
        t, k = self.t, self.k
        if k < 3:
            raise SpecError(f"k must be >= 3, got {k}")
        if not 1 <= t < k:
            raise SpecError(f"t must satisfy 1 <= t < k, got t={t}")
        if require_nonempty and not self.S:
            raise SpecError("S must be non-empty")
        for x in self.S:
            if len(x) != k or any(v not in (0, 1) for v in x):
                raise SpecError(f"tuple {bitstring(x)} is not a Boolean {k}-tuple")
            d = weight(x)
            if not 1 <= d < k:
                raise SpecError(f"tuple {bitstring(x)} is all-equal, hence not in NAE")
            if d == t:
                raise SpecError(f"tuple {bitstring(x)} already has weight t={t}")
        return self

    @property
    def weights(self) -> list[int]:
        return sorted({weight(x) for x in self.S})

    def to_dict(self) -> dict:
        return {"mode": self.mode.value, "t": self.t, "k": self.k,
                "S": [list(x) for x in self.S]}

    @classmethod
    def from_dict(cls, data: dict) -> "TemplateSpec":
        return cls(int(data["t"]), int(data["k"]),
                   tuple(tuple(x) for x in data.get("S", [])),
                   Mode(data.get("mode", "add")))


@dataclass(frozen=True)
class PCSPTemplate:
    A: RelStructure
    B: RelStructure

    def __post_init__(self):
        if not self.A.compatible(self.B):
            raise TemplateError("A and B must share a signature")
        if find_homomorphism(self.A, self.B) is None:
            raise TemplateError("no homomorphism A -> B")

    def to_dict(self) -> dict:
        return {"A": self.A.to_dict(), "B": self.B.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "PCSPTemplate":
        return cls(RelStructure.from_dict(data["A"]), RelStructure.from_dict(data["B"]))


def build_template(spec: TemplateSpec) -> PCSPTemplate:
    spec.validate()
    base = t_in_k(spec.t, spec.k)
    if spec.mode is Mode.ADD:
        return PCSPTemplate(boolean(base.union(spec.S)), boolean(nae(spec.k)))
    return PCSPTemplate(boolean(base), boolean(nae(spec.k).difference(spec.S)))


def first_tuple_of_weight(d: int, k: int) -> tuple[int, ...]:
    """The representative 1^d 0^(k-d)."""
    return (1,) * d + (0,) * (k - d)


def tuples_of_weight(d: int, k: int) -> list[tuple[int, ...]]:
    return sorted(t_in_k(d, k).tuples) if 0 < d < k else [(int(d == k),) * k]


def relation_weights(R: Relation) -> list[int]:
    return sorted({weight(x) for x in R.tuples})


def spec_from_bitstrings(mode: str, t: int, k: int, bits: Iterable[str]) -> TemplateSpec:
    return TemplateSpec(t, k, tuple(parse_bitstring(b) for b in bits), Mode(mode))

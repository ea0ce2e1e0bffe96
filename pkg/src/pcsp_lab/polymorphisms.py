"""Boolean polymorphisms: checks, enumeration, named families and
2-block-symmetric / alternating existence searches.

Truth tables index inputs by their binary encoding with x_1 as the most
significant bit, the same convention :func:`structures.power` uses.  In a
``(2m+1)``-ary block function the first block is the odd positions
x_1, x_3, ..., x_{2m+1} (m+1 of them) and the second the even positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import _config, _kernels, _sat
from .errors import CapacityError, DimError, DomainError, ParamError
from .structures import Relation, RelStructure, check_signature

MAX_TABLE_ARITY = 22
MAX_SEARCH_M = 7
DEFAULT_FAMILY_ARITY = 9


@dataclass(eq=False)
class BoolFn:
    arity: int
    table: np.ndarray
    name: str = ""

    def __post_init__(self):
        if self.arity < 0 or self.arity > MAX_TABLE_ARITY:
            raise CapacityError(f"arity {self.arity} outside [0, {MAX_TABLE_ARITY}]")
        self.table = np.ascontiguousarray(self.table, dtype=np.uint8).ravel()
        if self.table.shape != (1 << self.arity,):
            raise DimError(f"table must have length 2^{self.arity}")

    def __call__(self, *bits: int) -> int:
        if len(bits) == 1 and not isinstance(bits[0], (int, np.integer)):
            bits = tuple(bits[0])
        if len(bits) != self.arity:
            raise DimError(f"expected {self.arity} inputs, got {len(bits)}")
        idx = 0
        for b in bits:
            idx = 2 * idx + int(b)
        return int(self.table[idx])

    def __eq__(self, other):
        return (isinstance(other, BoolFn) and self.arity == other.arity
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.arity, self.table.tobytes()))

    def __repr__(self):
        label = self.name or "".join(map(str, self.table[:32].tolist()))
        return f"BoolFn({self.arity}, {label})"

    def negated(self) -> "BoolFn":
        return BoolFn(self.arity, 1 - self.table, f"not {self.name}" if self.name else "")

    def with_negated_inputs(self) -> "BoolFn":
        """x -> f(1-x_1, ..., 1-x_m)."""
        return BoolFn(self.arity, self.table[::-1].copy())

    def to_dict(self) -> dict:
        return {"kind": "table", "arity": self.arity, "name": self.name,
                "table": "".join(map(str, self.table.tolist()))}


def input_bits(m: int) -> np.ndarray:
    """(2^m, m) matrix whose row i is the input with index i."""
    idx = np.arange(1 << m, dtype=np.int64)
    return ((idx[:, None] >> np.arange(m - 1, -1, -1)) & 1).astype(np.int64)


@dataclass(eq=False)
class BlockSymFn:
    m: int
    table: np.ndarray  # (m+2, m+1): [weight on odd positions, weight on even positions]

    def __post_init__(self):
        self.table = np.ascontiguousarray(self.table, dtype=np.uint8)
        if self.table.shape != (self.m + 2, self.m + 1):
            raise DimError(f"block table must have shape {(self.m + 2, self.m + 1)}")

    def __eq__(self, other):
        return isinstance(other, BlockSymFn) and self.m == other.m and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.m, self.table.tobytes()))

    @property
    def arity(self) -> int:
        return 2 * self.m + 1

    @property
    def blocks(self) -> tuple[int, int]:
        return (self.m + 1, self.m)

    def __call__(self, w1: int, w2: int) -> int:
        return int(self.table[w1, w2])

    def expand(self) -> BoolFn:
        bits = input_bits(self.arity)
        return BoolFn(self.arity, self.table[bits[:, 0::2].sum(1), bits[:, 1::2].sum(1)])

    def to_dict(self) -> dict:
        cells = {f"({w1},{w2})": int(self.table[w1, w2])
                 for w1 in range(self.m + 2) for w2 in range(self.m + 1)}
        return {"kind": "block_symmetric", "arity": self.arity,
                "blocks": list(self.blocks), "table": cells}

    @classmethod
    def from_dict(cls, data: dict) -> "BlockSymFn":
        m = (int(data["arity"]) - 1) // 2
        table = np.zeros((m + 2, m + 1), dtype=np.uint8)
        for key, bit in data["table"].items():
            w1, w2 = (int(v) for v in key.strip("()").split(","))
            table[w1, w2] = bit
        return cls(m, table)


@dataclass(eq=False)
class AlternatingFn:
    m: int
    table: np.ndarray  # indexed by s + m, s = (odd weight) - (even weight) in [-m, m+1]

    def __post_init__(self):
        self.table = np.ascontiguousarray(self.table, dtype=np.uint8).ravel()
        if self.table.shape != (2 * self.m + 2,):
            raise DimError(f"alternating table must have length {2 * self.m + 2}")

    def __eq__(self, other):
        return isinstance(other, AlternatingFn) and self.m == other.m and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.m, self.table.tobytes()))

    @property
    def arity(self) -> int:
        return 2 * self.m + 1

    def __call__(self, s: int) -> int:
        return int(self.table[s + self.m])

    def to_block_symmetric(self) -> BlockSymFn:
        w1 = np.arange(self.m + 2)[:, None]
        w2 = np.arange(self.m + 1)[None, :]
        return BlockSymFn(self.m, self.table[w1 - w2 + self.m])

    def expand(self) -> BoolFn:
        return self.to_block_symmetric().expand()

    def to_dict(self) -> dict:
        return {"kind": "alternating", "arity": self.arity,
                "table": {str(s): int(self.table[s + self.m])
                          for s in range(-self.m, self.m + 2)}}

    @classmethod
    def from_dict(cls, data: dict) -> "AlternatingFn":
        m = (int(data["arity"]) - 1) // 2
        table = np.zeros(2 * m + 2, dtype=np.uint8)
        for key, bit in data["table"].items():
            table[int(key) + m] = bit
        return cls(m, table)


# -- low-level helpers ---------------------------------------------------------

def _boolean_rel(R: Relation) -> None:
    if R.tuples and (R.min_value() < 0 or R.max_value() > 1):
        raise DomainError("polymorphism checks need Boolean relations")


def target_mask(S: Relation) -> np.ndarray:
    """Boolean lookup over output codes (first coordinate most significant)."""
    _boolean_rel(S)
    mask = np.zeros(1 << S.arity, dtype=np.bool_)
    for tup in S.tuples:
        code = 0
        for v in tup:
            code = 2 * code + v
        mask[code] = True
    return mask


def _pairs(A: RelStructure, B: RelStructure):
    check_signature(A, B)
    if A.domain_size != 2 or B.domain_size != 2:
        raise DomainError("polymorphism checks need Boolean structures")
    for R, S in zip(A.relations, B.relations):
        _boolean_rel(R)
        yield R, S


def row_sums(R: Relation, count: int) -> np.ndarray:
    """Distinct row-sum vectors of all multisets of ``count`` columns from R."""
    cols = R.as_array()
    sums = np.zeros((1, R.arity), dtype=np.int64)
    for _ in range(count):
        sums = np.unique((sums[:, None, :] + cols[None, :, :]).reshape(-1, R.arity), axis=0)
    return sums


def apply_rows(f: BoolFn, M) -> tuple[int, ...]:
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2 or M.shape[1] != f.arity:
        raise DimError(f"matrix must have {f.arity} columns, got shape {M.shape}")
    if M.size and (M.min() < 0 or M.max() > 1):
        raise DomainError("matrix must be 0/1")
    idx = (M << np.arange(f.arity - 1, -1, -1)).sum(axis=1)
    return tuple(int(v) for v in f.table[idx])


def is_polymorphism(f: BoolFn, A: RelStructure, B: RelStructure, backend=None) -> bool:
    """Checks f row-wise on every sequence of arity(f) columns of each relation."""
    for R, S in _pairs(A, B):
        if R.arity != S.arity:
            raise DimError("relation arities differ")
        if not R.tuples:
            continue
        cols = R.as_array().T
        if _kernels.first_bad_sequence(f.table, cols, f.arity, target_mask(S), backend) >= 0:
            return False
    return True


def is_block_polymorphism(g: BlockSymFn, A: RelStructure, B: RelStructure, backend=None) -> bool:
    """Same answer as ``is_polymorphism(g.expand(), A, B)``, computed on multisets."""
    for R, S in _pairs(A, B):
        if not R.tuples:
            continue
        bad = _kernels.first_bad_pair(g.table, row_sums(R, g.m + 1), row_sums(R, g.m),
                                      target_mask(S), backend)
        if bad >= 0:
            return False
    return True


def is_symmetric_polymorphism(h: Sequence[int], m: int, A: RelStructure, B: RelStructure,
                              backend=None) -> bool:
    """f(x) = h[weight(x)] for an m-ary symmetric f."""
    h = np.asarray(h, dtype=np.uint8).reshape(m + 1, 1)
    for R, S in _pairs(A, B):
        if not R.tuples:
            continue
        zero = np.zeros((1, R.arity), dtype=np.int64)
        if _kernels.first_bad_pair(h, row_sums(R, m), zero, target_mask(S), backend) >= 0:
            return False
    return True


# -- clause generation shared by the searches ----------------------------------

def _clauses(cell_rows: np.ndarray, S: Relation) -> set[_sat.Clause]:
    """Clauses forbidding every pattern outside S on each row of cells."""
    k = S.arity
    forbidden = [p for p in product((0, 1), repeat=k) if p not in S.tuples]
    out: set[_sat.Clause] = set()
    if not forbidden:
        return out
    for row in np.unique(cell_rows, axis=0).tolist():
        for pattern in forbidden:
            need: dict[int, int] = {}
            ok = True
            for cell, bit in zip(row, pattern):
                if need.setdefault(cell, bit) != bit:
                    ok = False
                    break
            if ok:
                out.add(tuple(sorted((c, 1 - b) for c, b in need.items())))
    return out


def _solve_first(n: int, clauses: Iterable[_sat.Clause]) -> Optional[list[int]]:
    return next(_sat.solve(n, sorted(clauses)), None)


def enumerate_polymorphisms(A: RelStructure, B: RelStructure, m: int) -> list[BoolFn]:
    """All arity-m polymorphisms, in lexicographic order of their tables."""
    if m < 1:
        raise ParamError("arity must be >= 1")
    if m > MAX_TABLE_ARITY:
        raise CapacityError(f"arity {m} exceeds {MAX_TABLE_ARITY}")
    cap = _config.capacity()
    clauses: set[_sat.Clause] = set()
    weights = (1 << np.arange(m - 1, -1, -1)).astype(np.int64)
    for R, S in _pairs(A, B):
        if not R.tuples:
            continue
        if len(R) ** m > cap:
            raise CapacityError(f"{len(R)}^{m} column sequences exceed capacity {cap}")
        arr = R.as_array()
        grid = np.indices((len(arr),) * m).reshape(m, -1)
        cells = np.tensordot(weights, arr[grid], axes=(0, 0))  # (|R|^m, k)
        clauses |= _clauses(cells, S)
    return [BoolFn(m, np.array(sol, dtype=np.uint8))
            for sol in _sat.solve(1 << m, sorted(clauses), all_solutions=True)]


def _check_search_m(m: int, bound: Optional[int]) -> None:
    if m < 0:
        raise ParamError("arity must be odd and positive")
    if m > (MAX_SEARCH_M if bound is None else bound):
        raise CapacityError(f"m = {m} exceeds the search bound")


def _block_cells(A: RelStructure, B: RelStructure, m: int):
    for R, S in _pairs(A, B):
        if not R.tuples:
            continue
        yield _kernels.pair_cells(row_sums(R, m + 1), row_sums(R, m), m + 1), S


def exists_block_symmetric(A: RelStructure, B: RelStructure, arity: int,
                           max_m: Optional[int] = None) -> Optional[BlockSymFn]:
    """A 2-block-symmetric polymorphism of the given odd arity, or None."""
    if arity < 1 or arity % 2 == 0:
        raise ParamError(f"arity must be odd and positive, got {arity}")
    m = (arity - 1) // 2
    _check_search_m(m, max_m)
    clauses: set[_sat.Clause] = set()
    for cells, S in _block_cells(A, B, m):
        clauses |= _clauses(cells, S)
    sol = _solve_first((m + 2) * (m + 1), clauses)
    if sol is None:
        return None
    return BlockSymFn(m, np.array(sol, dtype=np.uint8).reshape(m + 2, m + 1))


def exists_alternating(A: RelStructure, B: RelStructure, arity: int,
                       max_m: Optional[int] = None) -> Optional[AlternatingFn]:
    """An alternating polymorphism of the given odd arity, or None."""
    if arity < 1 or arity % 2 == 0:
        raise ParamError(f"arity must be odd and positive, got {arity}")
    m = (arity - 1) // 2
    _check_search_m(m, max_m)
    w1 = np.arange(m + 2)[:, None]
    w2 = np.arange(m + 1)[None, :]
    to_s = (w1 - w2 + m).ravel()  # cell index -> alternating variable
    clauses: set[_sat.Clause] = set()
    for cells, S in _block_cells(A, B, m):
        clauses |= _clauses(to_s[cells], S)
    sol = _solve_first(2 * m + 2, clauses)
    if sol is None:
        return None
    return AlternatingFn(m, np.array(sol, dtype=np.uint8))


# -- named families ----------------------------------------------------------

FAMILIES = ("OR", "AND", "XOR", "AT", "MAJ", "THR", "CONST")
QLike = Union[Fraction, str, float, int, None]


def _as_q(q: QLike) -> Fraction:
    if q is None:
        raise ParamError("THR needs a threshold q")
    q = Fraction(q) if not isinstance(q, float) else Fraction(q).limit_denominator(10**6)
    if not 0 < q < 1:
        raise ParamError(f"THR needs 0 < q < 1, got {q}")
    return q


def family_arity_ok(name: str, m: int, q: QLike = None) -> bool:
    if m < 1:
        return False
    if name in ("AT", "XOR", "MAJ"):
        return m % 2 == 1
    if name == "THR":
        return (_as_q(q) * m).denominator != 1
    return True


def _check_family(name: str, m: int, q: QLike) -> None:
    if name not in FAMILIES:
        raise ParamError(f"unknown family {name!r}; expected one of {FAMILIES}")
    if not family_arity_ok(name, m, q):
        raise ParamError(f"{name} is not defined at arity {m}" + (f" with q={q}" if q is not None else ""))


def weight_table(name: str, m: int, q: QLike = None, c: int = 0) -> np.ndarray:
    """h with f(x) = h[weight(x)] for the symmetric families."""
    _check_family(name, m, q)
    w = np.arange(m + 1)
    if name == "OR":
        h = w > 0
    elif name == "AND":
        h = w == m
    elif name == "XOR":
        h = w % 2 == 1
    elif name == "MAJ":
        h = 2 * w > m
    elif name == "THR":
        qq = _as_q(q)
        h = np.array([Fraction(int(v)) >= qq * m for v in w])
    elif name == "CONST":
        h = np.full(m + 1, bool(c))
    else:
        raise ParamError(f"{name} is not a symmetric family")
    return h.astype(np.uint8)


def alternating_threshold_block(m: int) -> BlockSymFn:
    """AT_{2m+1} as a block table: 1 iff (odd weight) - (even weight) > 0."""
    w1 = np.arange(m + 2)[:, None]
    w2 = np.arange(m + 1)[None, :]
    return BlockSymFn(m, (w1 - w2 > 0).astype(np.uint8))


def family_label(name: str, q: QLike = None, c: int = 0, negated: bool = False) -> str:
    label = name
    if name == "THR":
        label = f"THR({_as_q(q)})"
    elif name == "CONST":
        label = f"CONST({int(c)})"
    return f"not {label}" if negated else label


def family_member(name: str, m: int, negated: bool = False, q: QLike = None, c: int = 0) -> BoolFn:
    name = name.upper()
    _check_family(name, m, q)
    if m > MAX_TABLE_ARITY:
        raise CapacityError(f"arity {m} exceeds {MAX_TABLE_ARITY}")
    bits = input_bits(m)
    if name == "AT":
        signs = np.where(np.arange(m) % 2 == 0, 1, -1)
        table = (bits @ signs > 0).astype(np.uint8)
    else:
        table = weight_table(name, m, q, c)[bits.sum(axis=1)]
    if negated:
        table = 1 - table
    return BoolFn(m, table, f"{family_label(name, q, c, negated)}_{m}")


@dataclass
class FamilyEvidence:
    """Bounded check of a polymorphism family; never a proof for the whole family."""

    family: str
    negated: bool
    max_arity: int
    arities: list[int]
    holds: bool
    failed_arity: Optional[int] = None
    kind: str = field(default="bounded-evidence")

    def __bool__(self) -> bool:
        return self.holds

    @property
    def label(self) -> str:
        return f"not {self.family}" if self.negated else self.family

    def to_dict(self) -> dict:
        return {"family": self.label, "max_arity": self.max_arity, "arities": self.arities,
                "holds": self.holds, "failed_arity": self.failed_arity, "kind": self.kind}


def family_arities(name: str, max_arity: int, q: QLike = None) -> list[int]:
    if name == "CONST":
        return [1]
    start = 2 if name in ("OR", "AND") else 1
    return [m for m in range(start, max_arity + 1) if family_arity_ok(name, m, q)]


def _member_in_pol(name, m, negated, q, c, A, B) -> bool:
    if name == "AT":
        g = alternating_threshold_block((m - 1) // 2)
        if negated:
            g = BlockSymFn(g.m, 1 - g.table)
        return is_block_polymorphism(g, A, B)
    h = weight_table(name, m, q, c)
    if negated:
        h = 1 - h
    return is_symmetric_polymorphism(h, m, A, B)


def check_family_in_pol(family: str, A: RelStructure, B: RelStructure,
                        max_arity: int = DEFAULT_FAMILY_ARITY, negated: bool = False,
                        q: QLike = None, c: int = 0) -> FamilyEvidence:
    name = family.upper()
    if name not in FAMILIES:
        raise ParamError(f"unknown family {family!r}")
    if max_arity < 1:
        raise ParamError("max_arity must be >= 1")
    if name == "THR":
        q = _as_q(q)
    arities = family_arities(name, max_arity, q)
    for m in arities:
        if not _member_in_pol(name, m, negated, q, c, A, B):
            return FamilyEvidence(family_label(name, q, c), negated, max_arity, arities, False, m)
    return FamilyEvidence(family_label(name, q, c), negated, max_arity, arities, True)


def is_alternating(f: BoolFn, samples: Optional[int] = None, rng=None) -> bool:
    """Exhaustive (or sampled) test of parity-block symmetry plus cancellation."""
    if f.arity % 2 == 0:
        return False
    if not is_block_symmetric(f):
        return False
    n = f.arity
    bits = input_bits(n - 2)
    if samples is not None:
        rng = rng or np.random.default_rng(0)
        bits = bits[rng.integers(0, len(bits), size=samples)]
    prefix = (bits << np.arange(n - 1, 1, -1)).sum(axis=1)
    return bool(np.array_equal(f.table[prefix], f.table[prefix + 3]))


def is_block_symmetric(f: BoolFn) -> bool:
    if f.arity % 2 == 0:
        return False
    bits = input_bits(f.arity)
    w1, w2 = bits[:, 0::2].sum(1), bits[:, 1::2].sum(1)
    key = w1 * (f.arity + 1) + w2
    first = {}
    for k_, v in zip(key.tolist(), f.table.tolist()):
        if first.setdefault(k_, v) != v:
            return False
    return True

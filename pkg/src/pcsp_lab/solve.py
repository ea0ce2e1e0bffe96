"""Solving instances: GF(2) search for the tractable templates plus a brute-force oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _config
from .errors import CapacityError, DimError, InternalError, PreconditionError
from .structures import RelStructure, check_signature, find_homomorphism, is_homomorphism
from .templates import Mode, TemplateSpec, build_template, weight

Assignment = list[int]


@dataclass
class GF2System:
    """Rows ``[c_1 ... c_n | rhs]`` over the two-element field."""

    n: int
    rows: np.ndarray

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.uint8).reshape(-1, self.n + 1) & 1

    @classmethod
    def from_equations(cls, n: int, eqs: Sequence[tuple[Sequence[int], int]]) -> "GF2System":
        """Each equation is (variable list, rhs); repeated variables cancel in pairs."""
        rows = np.zeros((len(eqs), n + 1), dtype=np.uint8)
        for i, (vars_, rhs) in enumerate(eqs):
            for v in vars_:
                if not 0 <= v < n:
                    raise DimError(f"variable {v} out of range")
                rows[i, v] ^= 1
            rows[i, n] = rhs & 1
        return cls(n, rows)

    def satisfied_by(self, x: Sequence[int]) -> bool:
        x = np.asarray(x, dtype=np.int64)
        return bool(np.all((self.rows[:, :self.n].astype(np.int64) @ x) % 2 == self.rows[:, self.n]))


def gf2_solve(S: GF2System) -> Optional[Assignment]:
    """Gauss-Jordan elimination; free variables are set to 0."""
    n = S.n
    # rows as Python ints: bit j is the coefficient of variable j, bit n is the rhs
    weights = 1 << np.arange(n + 1, dtype=object)
    rows = [int(sum(int(b) * w for b, w in zip(r, weights) if b)) for r in S.rows]
    pivots: list[tuple[int, int]] = []  # (column, row bits)
    for row in rows:
        for col, prow in pivots:
            if row >> col & 1:
                row ^= prow
        coef = row & ((1 << n) - 1)
        if coef == 0:
            if row >> n & 1:
                return None
            continue
        col = (coef & -coef).bit_length() - 1
        pivots = [(c, p ^ row if p >> col & 1 else p) for c, p in pivots]
        pivots.append((col, row))
    x = [0] * n
    for col, prow in pivots:
        x[col] = prow >> n & 1
    return x


def is_affine_tractable(spec: TemplateSpec) -> bool:
    if spec.t % 2 == 0 or spec.k % 2 == 1:
        return False
    want = 1 if spec.mode is Mode.ADD else 0
    return all(weight(x) % 2 == want for x in spec.S)


def affine_system(X: RelStructure, k: int) -> GF2System:
    """One equation "scope sums to 1" per constraint (membership in odd-in-k)."""
    eqs = []
    for R in X.relations:
        if R.arity != k:
            raise DimError(f"expected {k}-ary constraints, got arity {R.arity}")
        eqs.extend((list(scope), 1) for scope in R.sorted())
    return GF2System.from_equations(X.domain_size, eqs)


def solve_search_affine(X: RelStructure, spec: TemplateSpec) -> Optional[Assignment]:
    """A homomorphism X -> B via odd-in-k, or None when X has none to odd-in-k."""
    spec.validate()
    if not is_affine_tractable(spec):
        raise PreconditionError("the affine route needs t odd, k even and S of the tractable parity")
    template = build_template(spec)
    check_signature(X, template.B)
    x = gf2_solve(affine_system(X, spec.k))
    if x is None:
        return None
    if not is_homomorphism(x, X, template.B):
        raise InternalError("odd-in-k assignment is not a homomorphism to B")
    return x


def brute_solve(X: RelStructure, B: RelStructure) -> Optional[Assignment]:
    check_signature(X, B)
    if B.domain_size ** X.domain_size > _config.capacity():
        raise CapacityError(f"{B.domain_size}^{X.domain_size} maps exceed the capacity bound")
    phi = find_homomorphism(X, B)
    return None if phi is None else list(phi)

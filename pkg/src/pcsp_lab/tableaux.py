"""Matrix certificates refuting 2-block-symmetric polymorphisms of (t-in-k ∪ {x}, NAE).

One block of the argument matrix is filled with copies of ``C_k^t`` (all
cyclic shifts of ``1^t 0^(k-t)``), which has weight ``t`` in every row, so a
2-block-symmetric ``f`` only sees the row weights of the other block.  For
each pair among three weights we build that other block with every row
weight in the pair; whichever pair ``f`` cannot tell apart then yields an
all-equal output.

Matrices are ``uint8`` arrays of shape ``(k, columns)``; row and column
indices in code are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import CaseError, InternalError, ParamError
from .polymorphisms import BlockSymFn
from .templates import bitstring, first_tuple_of_weight

PROPS = (10, 11, 12, 13)
CASES = ("1", "2", "2a", "2b", "3")


# -- basic matrices ------------------------------------------------------------

def _check_kt(k: int, t: int) -> None:
    if k < 2 or not 1 <= t < k:
        raise ParamError(f"need 1 <= t < k, got k={k}, t={t}")


def cyclic_matrix(k: int, t: int) -> np.ndarray:
    """Column j is ``1^t 0^(k-t)`` shifted down cyclically by j."""
    _check_kt(k, t)
    i = np.arange(k)[:, None]
    j = np.arange(k)[None, :]
    return (((i - j) % k) < t).astype(np.uint8)


def c_minus(k: int, t: int) -> np.ndarray:
    return cyclic_matrix(k, t)[:, :-1].copy()


def c_plus(k: int, t: int) -> np.ndarray:
    """``C_k^t`` with one more ``1^t 0^(k-t)`` column appended at the right."""
    C = cyclic_matrix(k, t)
    return np.concatenate([C, C[:, :1]], axis=1)


def _swap(M: np.ndarray, col: int, r1: int, r2: int) -> None:
    M[r1, col], M[r2, col] = M[r2, col], M[r1, col]


def row_strings(M: np.ndarray) -> list[str]:
    return ["".join(str(int(v)) for v in row) for row in M]


def parse_rows(rows: Sequence[str]) -> np.ndarray:
    if not rows:
        return np.zeros((0, 0), dtype=np.uint8)
    return np.array([[int(c) for c in r] for r in rows], dtype=np.uint8)


# -- data types ----------------------------------------------------------------

@dataclass
class CaseParams:
    k: int
    t: int
    d: int
    r: int = 0
    a: Optional[Fraction] = None
    b: Optional[int] = None
    s: Optional[int] = None
    L: int = 1
    budget: Optional[int] = None
    at_least: Optional[tuple[Fraction, Fraction]] = None  # interval forcing row weight >= low
    at_most: Optional[tuple[Fraction, Fraction]] = None  # interval forcing row weight <= high
    interval: Optional[tuple[Fraction, Fraction]] = None  # all constraints combined

    def to_dict(self) -> dict:
        def frac(v):
            return None if v is None else str(v)

        def pair(p):
            return None if p is None else [str(p[0]), str(p[1])]

        return {"k": self.k, "t": self.t, "d": self.d, "r": self.r, "a": frac(self.a),
                "b": self.b, "s": self.s, "L": self.L, "budget": self.budget,
                "at_least": pair(self.at_least), "at_most": pair(self.at_most),
                "interval": pair(self.interval)}


@dataclass
class Tableau:
    """A fixed block of ``L`` copies of ``C_k^t`` beside a constructed block.

    ``fixed_parity`` says which coordinate block of the 2-block-symmetric
    function the fixed block fills ("odd" = positions 1, 3, 5, ...).
    """

    prop: int
    case: str
    k: int
    t: int
    d: int
    x: tuple[int, ...]
    fixed: np.ndarray
    block: np.ndarray
    weights: tuple[int, int]
    fixed_parity: str
    copies: int = 1
    x_columns: int = 0
    negated: bool = False
    params: Optional[CaseParams] = field(default=None, compare=False)

    @property
    def arity(self) -> int:
        return self.fixed.shape[1] + self.block.shape[1]

    @property
    def odd_block(self) -> np.ndarray:
        return self.fixed if self.fixed_parity == "odd" else self.block

    @property
    def even_block(self) -> np.ndarray:
        return self.block if self.fixed_parity == "odd" else self.fixed

    def matrix(self) -> np.ndarray:
        """The full ``k × arity`` argument matrix, odd block on positions 1, 3, 5, ..."""
        odd, even = self.odd_block, self.even_block
        M = np.zeros((self.k, self.arity), dtype=np.uint8)
        M[:, 0::2] = odd
        M[:, 1::2] = even
        return M

    def apply(self, g: BlockSymFn) -> tuple[int, ...]:
        if g.arity != self.arity:
            raise ParamError(f"function arity {g.arity} does not match tableau arity {self.arity}")
        w_odd = self.odd_block.sum(axis=1)
        w_even = self.even_block.sum(axis=1)
        return tuple(int(g(int(u), int(v))) for u, v in zip(w_odd, w_even))

    def to_dict(self) -> dict:
        out = {"prop": self.prop, "case": self.case, "k": self.k, "t": self.t, "d": self.d,
               "x": bitstring(self.x), "arity": self.arity, "negated": self.negated,
               "fixed_parity": self.fixed_parity, "copies": self.copies,
               "x_columns": self.x_columns, "weights": list(self.weights),
               "fixed": row_strings(self.fixed), "block": row_strings(self.block)}
        if self.params is not None:
            p = self.params.to_dict()
            for key in ("r", "a", "b", "s", "L", "budget", "at_least", "at_most", "interval"):
                out[key] = p[key]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Tableau":
        k = int(data["k"])
        fixed = parse_rows(data["fixed"]).reshape(k, -1)
        block = parse_rows(data["block"]).reshape(k, -1)
        return cls(int(data["prop"]), str(data["case"]), k, int(data["t"]), int(data["d"]),
                   tuple(int(c) for c in data["x"]), fixed, block,
                   tuple(data["weights"]), data["fixed_parity"], int(data.get("copies", 1)),
                   int(data.get("x_columns", 0)), bool(data.get("negated", False)))

    def render(self) -> str:
        """ASCII picture: fixed block, then x columns, then the rest, split by bars."""
        lines = []
        split = self.params.d if (self.params is not None and self.params.a is not None) else None
        for i, row in enumerate(self.block):
            fixed = "".join(str(int(v)) for v in self.fixed[i])
            xs = "".join(str(int(v)) for v in row[:self.x_columns])
            rest = "".join(str(int(v)) for v in row[self.x_columns:])
            parts = [fixed, xs, rest] if self.x_columns else [fixed, rest]
            lines.append(" | ".join(parts) + f"   ({int(row.sum())})")
            if split is not None and not self.negated and i == split - 1 and i < self.k - 1:
                lines.append("-" * len(lines[-1]))
        return "\n".join(lines)


@dataclass
class RefutationCertificate:
    k: int
    t: int
    d: int
    prop: int
    arity: int
    weights: tuple[int, int, int]
    tableaux: tuple[Tableau, Tableau, Tableau]
    negated: bool = False

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [tab.weights for tab in self.tableaux]

    def verify(self) -> bool:
        ws = set(self.weights)
        pairs = {frozenset(p) for p in self.pairs}
        return (len(ws) == 3
                and pairs == {frozenset(p) for p in
                              [(self.weights[0], self.weights[1]),
                               (self.weights[0], self.weights[2]),
                               (self.weights[1], self.weights[2])]}
                and all(tab.arity == self.arity for tab in self.tableaux)
                and all(verify_tableau(tab) for tab in self.tableaux))

    def to_dict(self) -> dict:
        return {"k": self.k, "t": self.t, "d": self.d, "prop": self.prop, "arity": self.arity,
                "negated": self.negated, "weights": list(self.weights),
                "conclusion": ("any 2-block-symmetric f of this arity agrees on one of the "
                               "three weight pairs and then outputs an all-equal tuple"),
                "verified": self.verify(),
                "tableaux": [tab.to_dict() for tab in self.tableaux]}


# -- verification --------------------------------------------------------------

def _column_multiset(M: np.ndarray) -> list:
    if M.shape[0] <= 62:
        return sorted((M.T.astype(np.int64) @ (1 << np.arange(M.shape[0], dtype=np.int64))).tolist())
    return sorted(row_strings(M.T))


def verify_tableau(tab: Tableau) -> bool:
    k, t = tab.k, tab.t
    fixed, block = np.asarray(tab.fixed), np.asarray(tab.block)
    if fixed.shape[0] != k or block.shape[0] != k:
        return False
    if fixed.size and (fixed.max() > 1 or block.max(initial=0) > 1):
        return False
    x = np.asarray(tab.x, dtype=np.uint8)
    if len(x) != k:
        return False
    # (a) constructed columns lie in t-in-k ∪ {x}
    for col in block.T:
        if int(col.sum()) != t and not np.array_equal(col, x):
            return False
    # (b) constructed row weights are in the pair
    if not set(int(w) for w in block.sum(axis=1)) <= set(tab.weights):
        return False
    # (c) the fixed block is exactly the declared copies of C_k^t
    expected = _column_multiset(np.tile(cyclic_matrix(k, t), (1, tab.copies)))
    if _column_multiset(fixed) != expected:
        return False
    odd, even = tab.odd_block, tab.even_block
    return odd.shape[1] == even.shape[1] + 1


# -- parameter helpers ---------------------------------------------------------

def normalize(k: int, t: int, d: int) -> tuple[int, int, bool]:
    """Swap 0's and 1's when ``d + t > k``; returns ``(t', d', negated)``."""
    if d + t > k:
        return k - t, k - d, True
    return t, d, False


def is_tractable_triple(k: int, t: int, d: int) -> bool:
    return k % 2 == 0 and t % 2 == 1 and d % 2 == 1


def _is_100(k: int, t: int, d: int) -> bool:
    return (k % 2, t % 2, d % 2) == (1, 0, 0)


def proposition_for(k: int, t: int, d: int) -> int:
    """Which construction applies to an already normalized triple."""
    if _is_100(k, t, d):
        return 12 if t < d else 13
    return 10 if t < d else 11


def _validate(k: int, t: int, d: int) -> None:
    if k < 3:
        raise ParamError(f"k must be >= 3, got {k}")
    if not 1 <= t < k:
        raise ParamError(f"t must satisfy 1 <= t < k, got {t}")
    if not 1 <= d < k:
        raise ParamError(f"d must satisfy 1 <= d < k, got {d}")
    if d == t:
        raise ParamError("d must differ from t")


def x_count(prop: int, k: int, t: int, d: int) -> int:
    if prop == 10:
        return math.ceil(t / (d - t))
    if prop == 11:
        return math.ceil(t / (t - d))
    return math.ceil((k - t) / abs(d - t))


def copies_needed(prop: int, k: int, t: int, d: int) -> int:
    if prop == 12:
        return max(1, math.ceil(Fraction(x_count(prop, k, t, d) - 1, t)))
    if prop == 13:
        return max(1, math.ceil(Fraction(x_count(prop, k, t, d) + 2, t)))
    return 1


def _check_prop(prop: int, k: int, t: int, d: int) -> None:
    if prop not in PROPS:
        raise CaseError(f"unknown construction {prop}; expected one of {PROPS}")
    if prop in (10, 12) and not t < d:
        raise CaseError(f"construction {prop} needs t < d")
    if prop in (11, 13) and not d < t:
        raise CaseError(f"construction {prop} needs d < t")
    if prop in (12, 13) and not _is_100(k, t, d):
        raise CaseError(f"construction {prop} needs (k, t, d) = (odd, even, even)")
    if prop in (10, 11) and not ((k - t) % 2 == 0 or (d - t) % 2 == 1):
        raise CaseError(f"construction {prop} needs t = k or d != t (mod 2)")


# -- constructions -------------------------------------------------------------

def _layout(prop: int, k: int, L: int) -> tuple[int, str]:
    """Column count of the constructed block and the parity of the fixed block."""
    return {10: (k - 1, "odd"), 11: (k + 1, "even"),
            12: (L * k + 1, "even"), 13: (L * k - 1, "odd")}[prop]


def _weights(prop: int, t: int, L: int) -> tuple[int, int, int]:
    return {10: (t - 1, t, t + 1), 11: (t - 1, t, t + 1),
            12: (L * t, L * t + 1, L * t + 2), 13: (L * t, L * t - 1, L * t - 2)}[prop]


def _case_pair(prop: int, case: str, t: int, L: int) -> tuple[int, int]:
    w = _weights(prop, t, L)
    pairs = {"1": (w[0], w[1]), "2": (w[0], w[2]), "3": (w[1], w[2])}
    if prop == 11:
        pairs["1"], pairs["3"] = pairs["3"], pairs["1"]
    return pairs[case[0]]


def _case_two_kind(k: int, t: int, d: int) -> str:
    return "2a" if (k - t) % 2 == 0 else "2b"


def _build_case_two(prop: int, kind: str, k: int, t: int, d: int, x: np.ndarray) -> tuple[np.ndarray, int]:
    if prop == 10:
        M = c_minus(k, t)
        if kind == "2a":
            # rows (t, t+1), (t+2, t+3), ... in columns t+1, t+3, ... (1-based)
            for i in range(0, k - 1 - t, 2):
                _swap(M, t + i, t - 1 + i, t + i)
            return M, 0
        M[:, 0] = x
        if t >= 2:
            _swap(M, 1, t - 1, d)
        else:
            # column 2 has no 1 in row t when t = 1; move the 1 of row d+1 up instead
            _swap(M, d, 0, d)
        for i in range(0, k - 2 - d, 2):
            _swap(M, d + 2 + i, d + 1 + i, d + 2 + i)
        return M, 1
    if prop == 11:
        M = c_plus(k, t)
        if kind == "2a":
            for i in range(0, k - t, 2):
                _swap(M, t + 1 + i, t + i, t + 1 + i)
            return M, 0
        M[:, 0] = x
        for i in range(0, k - d, 2):
            _swap(M, d + 1 + i, d + i, d + 1 + i)
        return M, 1
    raise InternalError("case 2 subkinds only exist for constructions 10 and 11")


def _fill(rows: int, quotas: Sequence[int]) -> np.ndarray:
    """Columns with the given numbers of 1's, placed top to bottom with wrap-around,
    each column continuing just below where the previous one stopped."""
    M = np.zeros((rows, len(quotas)), dtype=np.uint8)
    p = 0
    for j, q in enumerate(quotas):
        if q > rows or q < 0:
            raise InternalError(f"column quota {q} does not fit into {rows} rows")
        for _ in range(q):
            M[p % rows, j] = 1
            p += 1
    return M


def case_three_params(prop: int, k: int, t: int, d: int, a: Optional[Fraction] = None,
                      L: Optional[int] = None) -> CaseParams:
    L = copies_needed(prop, k, t, d) if L is None else L
    N, _ = _layout(prop, k, L)
    lo, hi = sorted(_case_pair(prop, "3", t, L))
    r = x_count(prop, k, t, d)
    n = N - r
    if n <= 0:
        raise CaseError(f"no room for t-in-k columns (budget {n})")
    F = Fraction
    # upper d rows get r ones from the x columns plus a*n from the rest;
    # lower k-d rows get (t-a)*n.  Row weights inside a group differ by at most one.
    at_least = (F(d * (lo - r), n), t - F((k - d) * lo, n))
    at_most = (t - F((k - d) * hi, n), F(d * (hi - r), n))
    fits = (F(max(0, d + t - k)), F(min(d, t)))
    low = max(at_least[0], at_most[0], fits[0])
    high = min(at_least[1], at_most[1], fits[1])
    params = CaseParams(k, t, d, r=r, L=L, budget=n, at_least=at_least, at_most=at_most,
                        interval=(low, high))
    if low > high:
        if d + t <= k:
            raise InternalError(f"empty interval for a: [{low}, {high}] at k={k}, t={t}, d={d}")
        raise CaseError(f"no admissible a for k={k}, t={t}, d={d} without normalization")
    if a is None:
        a = low
    a = F(a)
    if not low <= a <= high:
        raise ParamError(f"a={a} lies outside the admissible interval [{low}, {high}]")
    if (a * n).denominator != 1:
        raise ParamError(f"a={a} must be a multiple of 1/{n}")
    b = math.floor(a)
    s = n * (b + 1 - a)
    if s.denominator != 1 or not 0 <= s <= n:
        raise InternalError(f"s={s} is not an integer in [0, {n}]")
    params.a, params.b, params.s = a, b, int(s)
    return params


def _build_case_three(params: CaseParams, x: np.ndarray) -> np.ndarray:
    k, t, d, n, b, s = params.k, params.t, params.d, params.budget, params.b, params.s
    upper_q = [b] * s + [b + 1] * (n - s)
    M = np.zeros((k, params.r + n), dtype=np.uint8)
    M[:, :params.r] = x[:, None]
    M[:d, params.r:] = _fill(d, upper_q)
    M[d:, params.r:] = _fill(k - d, [t - q for q in upper_q])
    return M


def build_case(prop: int, case: Union[str, int], k: int, t: int, d: int,
               a: Optional[Fraction] = None) -> tuple[Tableau, CaseParams]:
    """The tableau of one case of one construction, for ``(k, t, d)`` as given.

    No 0/1 swap is applied here; :func:`refute` handles that.
    """
    _validate(k, t, d)
    case = str(case)
    if case not in CASES:
        raise CaseError(f"unknown case {case!r}; expected one of {CASES}")
    _check_prop(prop, k, t, d)
    L = copies_needed(prop, k, t, d)
    N, parity = _layout(prop, k, L)
    x = np.array(first_tuple_of_weight(d, k), dtype=np.uint8)
    C = cyclic_matrix(k, t)
    fixed = np.tile(C, (1, L))
    params = CaseParams(k, t, d, L=L)
    label = case
    if prop in (10, 11):
        if case in ("2", "2a", "2b"):
            kind = _case_two_kind(k, t, d)
            if case != "2" and case != kind:
                raise CaseError(f"case {case} does not apply; the parities of (k, t, d) select {kind}")
            block, xc = _build_case_two(prop, kind, k, t, d, x)
            params.r = xc
            label = kind
        elif case == "1":
            block, xc = (c_minus(k, t) if prop == 10 else c_plus(k, t)), 0
        else:
            params = case_three_params(prop, k, t, d, a, L)
            block, xc = _build_case_three(params, x), params.r
    else:
        if case in ("2a", "2b"):
            raise CaseError(f"construction {prop} has a single case 2")
        rest = [C] * (L - 1)
        if case == "3":
            params = case_three_params(prop, k, t, d, a, L)
            block, xc = _build_case_three(params, x), params.r
        else:
            first = c_plus(k, t) if prop == 12 else c_minus(k, t)
            if case == "2":
                if prop == 12:
                    for i in range(0, t, 2):
                        _swap(first, 1 + i, i, i + 1)
                else:
                    for i in range(0, t - 2, 2):
                        _swap(first, 1 + i, i, i + 1)
                    _swap(first, k - 2, k - 1, t - 2)
            block, xc = np.concatenate([first] + rest, axis=1), 0
    if block.shape[1] != N:
        raise InternalError(f"constructed block has {block.shape[1]} columns, expected {N}")
    tab = Tableau(prop, label, k, t, d, tuple(int(v) for v in x), fixed, block,
                  _case_pair(prop, case, t, L), parity, copies=L, x_columns=xc, params=params)
    if not verify_tableau(tab):
        if d + t <= k:
            raise InternalError(f"construction {prop} case {label} failed to verify at "
                                f"k={k}, t={t}, d={d}")
        raise CaseError(f"construction {prop} case {label} does not apply at k={k}, t={t}, d={d} "
                        "without normalization")
    return tab, params


def negate_tableau(tab: Tableau, t_orig: int, d_orig: int) -> Tableau:
    """Move a certificate built for ``(k-t, k-d)`` back to ``(t, d)``.

    Complementing swaps the roles of 0 and 1; reversing the row order then
    turns the complemented ``x`` back into ``1^d 0^(k-d)``.  Cyclic column
    sets stay cyclic under both operations.
    """
    ncols = tab.block.shape[1]
    fixed = (1 - tab.fixed)[::-1].copy()
    block = (1 - tab.block)[::-1].copy()
    x = first_tuple_of_weight(d_orig, tab.k)
    w = (ncols - tab.weights[0], ncols - tab.weights[1])
    return replace(tab, t=t_orig, d=d_orig, x=x, fixed=fixed, block=block, weights=w,
                   negated=not tab.negated)


def refute(k: int, t: int, d: int) -> RefutationCertificate:
    """Three verifying tableaux ruling out 2-block-symmetric polymorphisms at one arity."""
    _validate(k, t, d)
    if is_tractable_triple(k, t, d):
        raise CaseError(f"(k, t, d) = ({k}, {t}, {d}) is the tractable parity case; no refutation exists")
    tn, dn, negated = normalize(k, t, d)
    prop = proposition_for(k, tn, dn)
    tabs = []
    for case in ("1", "2", "3"):
        tab, _ = build_case(prop, case, k, tn, dn)
        if negated:
            tab = negate_tableau(tab, t, d)
        tabs.append(tab)
    L = tabs[0].copies
    ncols = tabs[0].block.shape[1]
    weights = _weights(prop, tn, L)
    if negated:
        weights = tuple(ncols - w for w in weights)
    cert = RefutationCertificate(k, t, d, prop, tabs[0].arity, weights, tuple(tabs), negated)
    if not cert.verify():
        raise InternalError(f"certificate for ({k}, {t}, {d}) failed to verify")
    return cert


def refuted_arity(k: int, t: int, d: int) -> int:
    """Arity of the certificate :func:`refute` would produce, without building it."""
    _validate(k, t, d)
    if is_tractable_triple(k, t, d):
        raise CaseError("tractable parity case")
    tn, dn, _ = normalize(k, t, d)
    prop = proposition_for(k, tn, dn)
    L = copies_needed(prop, k, tn, dn)
    N, _ = _layout(prop, k, L)
    return N + L * k

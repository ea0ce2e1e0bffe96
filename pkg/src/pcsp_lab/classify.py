"""Classification of the tuple-added / tuple-removed templates and related checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import CaseError, PreconditionError, SpecError, TemplateError
from .polymorphisms import (
    FAMILIES,
    BoolFn,
    check_family_in_pol,
    family_member,
    is_polymorphism,
)
from .structures import (
    Relation,
    RelStructure,
    boolean,
    find_homomorphism,
    is_homomorphism,
    is_symmetric,
    largest_symmetric_subrelation,
)
from .tableaux import is_tractable_triple, normalize, proposition_for, refute, refuted_arity
from .templates import (
    Mode,
    TemplateSpec,
    bitstring,
    build_template,
    first_tuple_of_weight,
    nae,
    odd_k,
    t_in_k,
    tuples_of_weight,
    weight,
)


class Label(str, Enum):
    TRACTABLE_VIA_AIP = "TractableViaAIP"
    TRACTABLE = "Tractable"
    NOT_SOLVED_BY_BLP_AIP = "NotSolvedByBLPAIP"
    NP_HARD = "NPHard"


@dataclass
class ClassificationReport:
    label: Label
    theorem: str
    query: dict = field(default_factory=dict)
    witness: Optional[dict] = None

    @property
    def tractable(self) -> bool:
        return self.label in (Label.TRACTABLE, Label.TRACTABLE_VIA_AIP)

    def to_dict(self) -> dict:
        return {"label": self.label.value, "theorem": self.theorem,
                "query": self.query, "witness": self.witness}

    @classmethod
    def from_dict(cls, data: dict) -> "ClassificationReport":
        return cls(Label(data["label"]), data["theorem"], data.get("query", {}), data.get("witness"))


IDENTITY = (0, 1)


def _sandwich(lower: Relation, middle: Relation, upper: Relation) -> dict:
    """Identity maps lower -> middle -> upper, each checked."""
    A, M, B = boolean(lower), boolean(middle), boolean(upper)
    ok = is_homomorphism(IDENTITY, A, M) and is_homomorphism(IDENTITY, M, B)
    if not ok:
        raise TemplateError("sandwich inclusion failed")
    return {"kind": "sandwich", "through": f"odd-in-{middle.arity}",
            "A_to_middle": list(IDENTITY), "middle_to_B": list(IDENTITY),
            "polymorphisms": "XOR of every odd arity (alternating)"}


def _require_mode(spec: TemplateSpec, mode: Mode) -> None:
    if spec.mode is not mode:
        raise SpecError(f"expected a {mode.value}-mode spec, got {spec.mode.value}")


def _certificate_ref(k: int, t: int, d: int, certify: bool) -> dict:
    tn, dn, negated = normalize(k, t, d)
    ref = {"kind": "tableau-certificate", "k": k, "t": t, "d": d,
           "construction": proposition_for(k, tn, dn), "normalized": {"t": tn, "d": dn},
           "negated": negated, "arity": refuted_arity(k, t, d)}
    if certify:
        ref["certificate"] = refute(k, t, d).to_dict()
    return ref


def classify_add(spec: TemplateSpec, certify: bool = False) -> ClassificationReport:
    """t-in-k ∪ S versus NAE: solved by AIP under the parity rule, otherwise not by BLP+AIP."""
    _require_mode(spec, Mode.ADD)
    spec.validate(require_nonempty=True)
    t, k = spec.t, spec.k
    query = spec.to_dict()
    if t % 2 == 1 and k % 2 == 0 and all(weight(x) % 2 == 1 for x in spec.S):
        A = build_template(spec).A.relations[0]
        return ClassificationReport(Label.TRACTABLE_VIA_AIP, "add-parity-rule", query,
                                    _sandwich(A, odd_k(k), nae(k)))
    # a tuple outside the tractable parity pattern
    bad = next(x for x in spec.S if not is_tractable_triple(k, t, weight(x)))
    witness = _certificate_ref(k, t, weight(bad), certify)
    witness["tuple"] = bitstring(bad)
    return ClassificationReport(Label.NOT_SOLVED_BY_BLP_AIP, "add-parity-rule", query, witness)


def classify_remove(spec: TemplateSpec) -> ClassificationReport:
    """t-in-k versus NAE ∖ S: tractable under the parity rule, otherwise NP-hard."""
    _require_mode(spec, Mode.REMOVE)
    spec.validate(require_nonempty=True)
    t, k = spec.t, spec.k
    query = spec.to_dict()
    B = nae(k).difference(spec.S)
    if t % 2 == 1 and k % 2 == 0 and all(weight(x) % 2 == 0 for x in spec.S):
        return ClassificationReport(Label.TRACTABLE, "remove-parity-rule", query,
                                    _sandwich(t_in_k(t, k), odd_k(k), B))
    inner = classify_csp_superset(t, k, B)
    witness = {"kind": "hard-csp-superset", "csp_report": inner.to_dict()}
    return ClassificationReport(Label.NP_HARD, "remove-parity-rule", query, witness)


def classify_csp_superset(t: int, k: int, T: Relation) -> ClassificationReport:
    """CSP(T) for a relation T receiving a homomorphism from t-in-k."""
    if T.arity != k:
        raise PreconditionError(f"T must have arity {k}")
    phi = find_homomorphism(boolean(t_in_k(t, k)), boolean(T))
    if phi is None:
        raise PreconditionError("t-in-k has no homomorphism to T")
    query = {"t": t, "k": k, "T": [list(x) for x in T.sorted()]}
    zeros, ones = (0,) * k, (1,) * k
    if zeros in T or ones in T:
        const = 0 if zeros in T else 1
        return ClassificationReport(Label.TRACTABLE, "csp-superset-rule", query,
                                    {"kind": "constant-polymorphism", "value": const,
                                     "map": list(phi)})
    if t % 2 == 1 and k % 2 == 0 and T == odd_k(k):
        return ClassificationReport(Label.TRACTABLE, "csp-superset-rule", query,
                                    {"kind": "affine", "polymorphism": "XOR_3", "map": list(phi)})
    schaefer = schaefer_check(boolean(T))
    return ClassificationReport(Label.NP_HARD, "csp-superset-rule", query,
                                {"kind": "no-schaefer-polymorphism", "map": list(phi),
                                 "schaefer": schaefer.witness})


SCHAEFER_FUNCTIONS = (
    ("CONST(0)", lambda: family_member("CONST", 1, c=0)),
    ("CONST(1)", lambda: family_member("CONST", 1, c=1)),
    ("AND_2", lambda: family_member("AND", 2)),
    ("OR_2", lambda: family_member("OR", 2)),
    ("MAJ_3", lambda: family_member("MAJ", 3)),
    ("XOR_3", lambda: family_member("XOR", 3)),
)


def schaefer_check(B: RelStructure) -> ClassificationReport:
    if B.domain_size != 2:
        raise PreconditionError("Schaefer's test needs a Boolean structure")
    found = [name for name, make in SCHAEFER_FUNCTIONS if is_polymorphism(make(), B, B)]
    witness = {"kind": "schaefer", "tested": [name for name, _ in SCHAEFER_FUNCTIONS],
               "polymorphisms": found}
    label = Label.TRACTABLE if found else Label.NP_HARD
    return ClassificationReport(label, "schaefer", {"structure": B.to_dict()}, witness)


# -- closure traces ---------------------------------------------------------------

CLOSURE_CASES = ("i", "ii", "iii", "iv", "v", "vi", "vii")


def function_image(f: BoolFn, R: Relation) -> Relation:
    """Coordinate-wise images ``f(x_1, ..., x_m)`` over all ``x_i`` in ``R``."""
    arr = R.as_array()
    k = R.arity
    idx = np.zeros((1, k), dtype=np.int64)
    for _ in range(f.arity):
        idx = (idx[:, None, :] * 2 + arr[None, :, :]).reshape(-1, k)
    codes = np.unique(f.table[idx].astype(np.int64) @ (1 << np.arange(k - 1, -1, -1, dtype=np.int64)))
    rows = (codes[:, None] >> np.arange(k - 1, -1, -1)) & 1
    return Relation(k, frozenset(tuple(int(v) for v in row) for row in rows))


def _shifted_pair(w: int, k: int) -> list[tuple[int, ...]]:
    return [first_tuple_of_weight(w, k), (0,) + (1,) * w + (0,) * (k - w - 1)]


def _tail_triple(ones: int, tail: tuple[tuple[int, ...], ...], k: int) -> list[tuple[int, ...]]:
    zeros = k - ones - len(tail[0])
    return [(1,) * ones + (0,) * zeros + tt for tt in tail]


def _up3(w: int, k: int) -> list[tuple[int, ...]]:
    """Weight-w tuples ending in 110, 101, 011."""
    return _tail_triple(w - 2, ((1, 1, 0), (1, 0, 1), (0, 1, 1)), k)


def _down3(w: int, k: int) -> list[tuple[int, ...]]:
    """Weight-w tuples ending in 100, 010, 001."""
    return _tail_triple(w - 1, ((1, 0, 0), (0, 1, 0), (0, 0, 1)), k)


def _case_plan(case: str, t: int, k: int):
    """(function, step, generator, target weights) for one closure case."""
    if case == "i":
        return "AND", 2, -1, _shifted_pair, "0^k"
    if case == "ii":
        return "OR", 2, +1, _shifted_pair, "1^k"
    if case == "iii":
        if t < 2:
            raise CaseError("case iii needs t >= 2")
        return "MAJ", 3, +1, _up3, "1^k"
    if case == "iv":
        if t > k - 2:
            raise CaseError("case iv needs t <= k-2")
        return "MAJ", 3, -1, _down3, "0^k"
    if case == "v":
        if t % 2:
            raise CaseError("case v needs t even")
        return "XOR", 3, -2, _up3, "0^k"
    if case == "vi":
        if t % 2 == 0 or k % 2 == 0:
            raise CaseError("case vi needs t and k odd")
        return "XOR", 3, +2, _down3, "1^k"
    if case == "vii":
        if t % 2 == 0 or k % 2:
            raise CaseError("case vii needs t odd and k even")
        return "XOR", 3, 0, None, "all odd-weight tuples"
    raise CaseError(f"unknown closure case {case!r}; expected one of {CLOSURE_CASES}")


def _step(f: BoolFn, gen, w: int, k: int) -> dict:
    tuples = gen(w, k)
    out = tuple(int(v) for v in f.table[
        (np.array(tuples, dtype=np.int64).T << np.arange(f.arity - 1, -1, -1)).sum(axis=1)])
    w_out = weight(out)
    image = function_image(f, Relation(k, frozenset(tuples_of_weight(w, k))))
    included = set(tuples_of_weight(w_out, k)) <= image.tuples
    return {"from_weight": w, "to_weight": w_out, "function": f.name,
            "tuples": [bitstring(x) for x in tuples], "output": bitstring(out),
            "image_contains_all_of_weight": included}


def prop9_closure_trace(t: int, k: int, case: Union[str, int]) -> dict:
    """Repeatedly apply one Schaefer function to t-in-k, recording every weight step."""
    if isinstance(case, int):
        case = CLOSURE_CASES[case - 1] if 1 <= case <= 7 else str(case)
    case = str(case).lower()
    if not 1 <= t < k:
        raise CaseError(f"need 1 <= t < k, got t={t}, k={k}")
    name, m, step, gen, goal = _case_plan(case, t, k)
    f = family_member(name, m)
    steps = []
    reached: set[int] = {t}
    if case == "vii":
        w = t
        while w + 2 <= k - 1:
            steps.append(_step(f, _down3, w, k))
            w += 2
            reached.add(w)
        w = t
        while w - 2 >= 1:
            steps.append(_step(f, _up3, w, k))
            w -= 2
            reached.add(w)
        final = sorted(reached)
        ok = final == list(range(1, k, 2))
    else:
        w = t
        end = 0 if step < 0 else k
        while w != end:
            s = _step(f, gen, w, k)
            steps.append(s)
            if s["to_weight"] != w + step:
                break
            w = s["to_weight"]
            reached.add(w)
        final = [w]
        ok = w == end
    ok = ok and all(s["image_contains_all_of_weight"] for s in steps)
    return {"case": case, "t": t, "k": k, "function": f.name, "steps": steps,
            "final_weights": final, "goal": goal, "reached": ok}


def applicable_closure_cases(t: int, k: int) -> list[str]:
    out = []
    for case in CLOSURE_CASES:
        try:
            _case_plan(case, t, k)
        except CaseError:
            continue
        out.append(case)
    return out


# -- symmetric templates ------------------------------------------------------------

def symmetrize(A: RelStructure, B: RelStructure) -> tuple[RelStructure, RelStructure]:
    if not all(is_symmetric(R) for R in A.relations):
        raise PreconditionError("A must be symmetric")
    Bp = RelStructure(B.domain_size, tuple(largest_symmetric_subrelation(R) for R in B.relations))
    if find_homomorphism(A, Bp) is None:
        raise TemplateError("A has no homomorphism to the symmetrized B")
    return A, Bp


def threshold_grid(arity_bound: int) -> list[Fraction]:
    return sorted({Fraction(p, n) for n in range(2, arity_bound + 1) for p in range(1, n)})


def symmetric_dichotomy_evidence(A: RelStructure, B: RelStructure, arity_bound: int = 9) -> dict:
    """Bounded-arity check of each tractable family and its negation.

    Surviving families are evidence only; a refuted family is refuted for good.
    """
    if A.domain_size != 2 or B.domain_size != 2:
        raise PreconditionError("structures must be Boolean")
    if not all(is_symmetric(R) for R in A.relations + B.relations):
        raise PreconditionError("structures must be symmetric")
    results = []
    for fam in FAMILIES:
        for negated in (False, True):
            if fam == "CONST":
                if negated:
                    continue
                for c in (0, 1):
                    results.append(check_family_in_pol(fam, A, B, arity_bound, c=c).to_dict())
            elif fam == "THR":
                for q in threshold_grid(arity_bound):
                    ev = check_family_in_pol(fam, A, B, arity_bound, negated=negated, q=q)
                    if ev.arities:
                        results.append(ev.to_dict())
            else:
                results.append(check_family_in_pol(fam, A, B, arity_bound, negated=negated).to_dict())
    survivors = [r["family"] for r in results if r["holds"]]
    return {"kind": "bounded-evidence", "arity_bound": arity_bound,
            "families": results, "survivors": survivors}

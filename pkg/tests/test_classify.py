from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pcsp_lab.classify import (
    ClassificationReport,
    Label,
    applicable_closure_cases,
    classify_add,
    classify_csp_superset,
    classify_remove,
    function_image,
    prop9_closure_trace,
    schaefer_check,
    symmetric_dichotomy_evidence,
    symmetrize,
)
from pcsp_lab.errors import CaseError, PreconditionError, SpecError
from pcsp_lab.polymorphisms import apply_rows, enumerate_polymorphisms, family_member, is_polymorphism
from pcsp_lab.structures import Relation, boolean, is_homomorphism
from pcsp_lab.templates import (
    Mode,
    TemplateSpec,
    first_tuple_of_weight,
    full_relation,
    nae,
    odd_k,
    parse_bitstring,
    t_in_k,
)


def spec(mode, t, k, *bits):
    return TemplateSpec(t, k, tuple(parse_bitstring(b) for b in bits), Mode(mode))


# -- main rules ------------------------------------------------------------------

def test_add_examples():
    assert classify_add(spec("add", 1, 4, "1110")).label is Label.TRACTABLE_VIA_AIP
    assert classify_add(spec("add", 1, 3, "110")).label is Label.NOT_SOLVED_BY_BLP_AIP
    assert classify_add(spec("add", 2, 4, "1110")).label is Label.NOT_SOLVED_BY_BLP_AIP
    with pytest.raises(SpecError):
        classify_add(spec("add", 1, 4))


def test_add_witnesses():
    rep = classify_add(spec("add", 1, 4, "1110"))
    w = rep.witness
    A = boolean(t_in_k(1, 4).union([(1, 1, 1, 0)]))
    assert is_homomorphism(w["A_to_middle"], A, boolean(odd_k(4)))
    assert is_homomorphism(w["middle_to_B"], boolean(odd_k(4)), boolean(nae(4)))
    rep = classify_add(spec("add", 1, 3, "110"), certify=True)
    cert = rep.witness["certificate"]
    assert cert["verified"] and cert["arity"] == 5


def test_remove_examples():
    assert classify_remove(spec("remove", 1, 4, "1100")).label is Label.TRACTABLE
    assert classify_remove(spec("remove", 1, 4, "1110")).label is Label.NP_HARD
    assert classify_remove(spec("remove", 1, 3, "110")).label is Label.NP_HARD


def test_labels_never_cross_modes():
    for k in range(3, 7):
        for t in range(1, k):
            for d in range(1, k):
                if d == t:
                    continue
                x = first_tuple_of_weight(d, k)
                assert classify_add(TemplateSpec(t, k, (x,), Mode.ADD)).label in \
                    (Label.TRACTABLE_VIA_AIP, Label.NOT_SOLVED_BY_BLP_AIP)
                assert classify_remove(TemplateSpec(t, k, (x,), Mode.REMOVE)).label in \
                    (Label.TRACTABLE, Label.NP_HARD)


def test_singleton_sweep_matches_parity_rule():
    for k in range(3, 7):
        for t in range(1, k):
            for d in range(1, k):
                if d == t:
                    continue
                for x in t_in_k(d, k).sorted():
                    want = t % 2 == 1 and k % 2 == 0 and d % 2 == 1
                    assert classify_add(TemplateSpec(t, k, (x,), Mode.ADD)).tractable == want
                    want = t % 2 == 1 and k % 2 == 0 and d % 2 == 0
                    assert classify_remove(TemplateSpec(t, k, (x,), Mode.REMOVE)).tractable == want


@given(st.integers(3, 6).flatmap(lambda k: st.tuples(
    st.just(k), st.integers(1, k - 1),
    st.sets(st.tuples(*[st.integers(0, 1)] * k), min_size=1, max_size=6))))
def test_multi_tuple_sets(args):
    k, t, S = args
    S = {x for x in S if 0 < sum(x) < k and sum(x) != t}
    if not S:
        return
    parity_ok = t % 2 == 1 and k % 2 == 0
    add = classify_add(TemplateSpec(t, k, tuple(S), Mode.ADD))
    assert add.tractable == (parity_ok and all(sum(x) % 2 for x in S))
    rem = classify_remove(TemplateSpec(t, k, tuple(S), Mode.REMOVE))
    assert rem.tractable == (parity_ok and all(sum(x) % 2 == 0 for x in S))
    if not rem.tractable:
        T = nae(k).difference(S)
        assert classify_csp_superset(t, k, T).label is Label.NP_HARD


# -- CSP supersets and Schaefer ------------------------------------------------------

def test_csp_superset_examples():
    assert classify_csp_superset(1, 3, t_in_k(1, 3)).label is Label.NP_HARD
    assert classify_csp_superset(1, 4, odd_k(4)).label is Label.TRACTABLE
    assert classify_csp_superset(1, 3, t_in_k(1, 3).union([(0, 0, 0)])).label is Label.TRACTABLE
    # negation maps 1-in-3 onto 2-in-3
    assert classify_csp_superset(1, 3, t_in_k(2, 3)).label is Label.NP_HARD
    with pytest.raises(PreconditionError):
        classify_csp_superset(1, 3, Relation.of([(1, 1, 0)]))


def schaefer_oracle(R):
    """Closure under each Schaefer function, by direct enumeration of argument tuples."""
    fns = {"CONST(0)": (1, lambda *a: 0), "CONST(1)": (1, lambda *a: 1),
           "AND_2": (2, lambda a, b: a & b), "OR_2": (2, lambda a, b: a | b),
           "MAJ_3": (3, lambda a, b, c: int(a + b + c >= 2)), "XOR_3": (3, lambda a, b, c: a ^ b ^ c)}
    found = []
    for name, (m, f) in fns.items():
        if all(tuple(f(*col) for col in zip(*xs)) in R.tuples for xs in product(R.sorted(), repeat=m)):
            found.append(name)
    return found


@given(st.integers(2, 4).flatmap(
    lambda k: st.sets(st.tuples(*[st.integers(0, 1)] * k), min_size=1, max_size=2 ** k)))
def test_schaefer_matches_oracle(tuples):
    R = Relation.of(tuples)
    rep = schaefer_check(boolean(R))
    assert rep.witness["polymorphisms"] == schaefer_oracle(R)
    assert rep.tractable == bool(schaefer_oracle(R))


def test_schaefer_examples():
    rep = schaefer_check(boolean(odd_k(4)))
    assert rep.label is Label.TRACTABLE and "XOR_3" in rep.witness["polymorphisms"]
    assert schaefer_check(boolean(t_in_k(1, 3))).label is Label.NP_HARD
    rep = schaefer_check(boolean(full_relation(3)))
    assert "CONST(0)" in rep.witness["polymorphisms"]


def test_report_round_trip():
    rep = classify_remove(spec("remove", 2, 5, "11100"))
    assert ClassificationReport.from_dict(rep.to_dict()) == rep


# -- closure traces -------------------------------------------------------------------

GOALS = {"i": "zeros", "ii": "ones", "iii": "ones", "iv": "zeros", "v": "zeros", "vi": "ones",
         "vii": "odd"}
FUNCS = {"i": ("AND", 2), "ii": ("OR", 2), "iii": ("MAJ", 3), "iv": ("MAJ", 3),
         "v": ("XOR", 3), "vi": ("XOR", 3), "vii": ("XOR", 3)}


def closure_oracle(R, f):
    """Smallest relation containing R and closed under f, by plain iteration."""
    cur = set(R.tuples)
    while True:
        new = {tuple(f(*col) for col in zip(*xs)) for xs in product(sorted(cur), repeat=f.arity)}
        if new <= cur:
            return cur
        cur |= new


@pytest.mark.parametrize("k", [3, 4, 5])
def test_closure_goals_against_oracle(k):
    for t in range(1, k):
        for case in applicable_closure_cases(t, k):
            tr = prop9_closure_trace(t, k, case)
            assert tr["reached"]
            name, m = FUNCS[case]
            closed = closure_oracle(t_in_k(t, k), family_member(name, m))
            goal = GOALS[case]
            if goal == "zeros":
                assert (0,) * k in closed
            elif goal == "ones":
                assert (1,) * k in closed
            else:
                assert odd_k(k).tuples <= closed


def test_closure_steps_recomputed():
    for k in range(3, 9):
        for t in range(1, k):
            for case in applicable_closure_cases(t, k):
                tr = prop9_closure_trace(t, k, case)
                assert tr["reached"], (t, k, case)
                f = family_member(*FUNCS[case])
                for s in tr["steps"]:
                    cols = np.array([parse_bitstring(x) for x in s["tuples"]]).T
                    out = apply_rows(f, cols)
                    assert "".join(map(str, out)) == s["output"]
                    assert sum(out) == s["to_weight"]
                    assert all(sum(parse_bitstring(x)) == s["from_weight"] for x in s["tuples"])


def test_closure_examples_and_errors():
    assert prop9_closure_trace(1, 3, "i")["final_weights"] == [0]
    assert prop9_closure_trace(1, 3, "ii")["final_weights"] == [3]
    assert prop9_closure_trace(1, 4, "vii")["final_weights"] == [1, 3]
    with pytest.raises(CaseError):
        prop9_closure_trace(1, 4, "iii")
    with pytest.raises(CaseError):
        prop9_closure_trace(2, 4, "vii")


def test_function_image_matches_enumeration():
    R = t_in_k(2, 4)
    f = family_member("MAJ", 3)
    want = {tuple(f(*col) for col in zip(*xs)) for xs in product(R.sorted(), repeat=3)}
    assert function_image(f, R).tuples == want


# -- symmetric templates ------------------------------------------------------------

def test_symmetrize_examples():
    A = boolean(t_in_k(1, 3))
    _, Bp = symmetrize(A, boolean(nae(3).difference([(1, 1, 0)])))
    assert Bp.relations[0] == t_in_k(1, 3)
    _, Bp = symmetrize(A, boolean(nae(3)))
    assert Bp.relations[0] == nae(3)
    with pytest.raises(PreconditionError):
        symmetrize(boolean(t_in_k(1, 3).union([(1, 1, 0)])), boolean(nae(3)))


def test_symmetrize_preserves_small_polymorphisms(rng):
    for k in (3, 4):
        A = boolean(t_in_k(1, k))
        for _ in range(4):
            drop = [x for x in nae(k).sorted() if sum(x) != 1 and rng.random() < 0.3]
            B = boolean(nae(k).difference(drop))
            _, Bp = symmetrize(A, B)
            for m in (1, 2):
                assert enumerate_polymorphisms(A, B, m) == enumerate_polymorphisms(A, Bp, m)


def test_dichotomy_evidence():
    ev = symmetric_dichotomy_evidence(boolean(t_in_k(1, 3)), boolean(nae(3)), 9)
    assert ev["kind"] == "bounded-evidence"
    assert "AT" in ev["survivors"]
    assert set(ev["survivors"]) == {"AT", "not AT", "THR(1/3)", "not THR(1/3)"}
    ev = symmetric_dichotomy_evidence(boolean(t_in_k(1, 3)), boolean(t_in_k(1, 3)), 5)
    assert ev["survivors"] == []
    ev = symmetric_dichotomy_evidence(boolean(odd_k(4)), boolean(odd_k(4)), 9)
    assert "XOR" in ev["survivors"]
    with pytest.raises(PreconditionError):
        symmetric_dichotomy_evidence(boolean(t_in_k(1, 3).union([(1, 1, 0)])), boolean(nae(3)))


@pytest.mark.parametrize("m", [2, 4, 5, 7, 8])
def test_third_threshold_really_is_a_polymorphism(m):
    # one 1 per column, so row sums add to m; m/3 is not an integer, hence
    # neither all rows <= m/3 nor all rows > m/3 is possible
    f = family_member("THR", m, q=Fraction(1, 3))
    assert is_polymorphism(f, boolean(t_in_k(1, 3)), boolean(nae(3)))
    P = boolean(t_in_k(1, 3))
    assert all(len(set(apply_rows(f, np.array(cols).T))) == 2
               for cols in product(P.relations[0].sorted(), repeat=m))

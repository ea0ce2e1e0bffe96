from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from pcsp_lab.relax import (
    IntSystem,
    LPProblem,
    Simplex,
    Verdict,
    aip_build,
    aip_decide,
    augment_unary,
    blp_aip,
    blp_build,
    check_int_point,
    check_lp_point,
    emit_text,
    int_feasible,
    lp_feasible,
    relative_interior_point,
    solve_integer,
)
from pcsp_lab.relax.simplex import Unbounded
from pcsp_lab.structures import Relation, RelStructure, boolean, find_homomorphism
from pcsp_lab.templates import nae, odd_k, t_in_k

from _gen import planted_instance, random_instance

ONE3 = boolean(t_in_k(1, 3))
XXX = RelStructure(1, (Relation.of([(0, 0, 0)]),))
EMPTY = RelStructure(3, (Relation(3, frozenset()),))


def lp(rows, rhs, bounded=True):
    n = 1 + max((c for r in rows for c in r), default=-1)
    keys = [(0, (j,), (0,)) for j in range(n)]
    bounds = {j: Fraction(1) for j in range(n)} if bounded else {}
    return LPProblem(keys, rows, rhs, 0, bounds=bounds)


def intsys(rows, rhs, zero=frozenset()):
    n = 1 + max(c for r in rows for c in r)
    return IntSystem([(0, (j,), (0,)) for j in range(n)], rows, rhs, 0, zero=frozenset(zero))


# -- simplex -------------------------------------------------------------------------

small_lps = st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=3),
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
    st.lists(st.integers(-2, 2), min_size=n, max_size=n),
    st.booleans()))


@given(small_lps, st.sampled_from(["dantzig", "bland"]))
def test_simplex_matches_linprog(args, rule):
    n, A, b, c, boxed = args
    b = b[: len(A)]
    rows = [{j: Fraction(v) for j, v in enumerate(r) if v} for r in A]
    upper = {j: Fraction(1) for j in range(n)} if boxed else None
    S = Simplex(n, rows, [Fraction(v) for v in b], upper, rule=rule)
    ref = linprog(-np.array(c, float), A_eq=np.array(A, float), b_eq=np.array(b, float),
                  bounds=[(0, 1 if boxed else None)] * n, method="highs")
    assert S.feasible == (ref.status != 2)
    if not S.feasible:
        return
    x = S.point()
    assert all(v >= 0 for v in x) and (not boxed or all(v <= 1 for v in x))
    assert all(sum(r.get(j, 0) * x[j] for j in range(n)) == bi for r, bi in zip(rows, b))
    try:
        val, pt = S.maximize({j: Fraction(v) for j, v in enumerate(c)})
    except Unbounded:
        assert ref.status == 3
        return
    assert ref.status == 0
    assert val == sum(Fraction(v) * pt[j] for j, v in enumerate(c))
    assert abs(float(val) + ref.fun) < 1e-7


def test_lp_examples():
    out = lp_feasible(lp([{0: 1}], [Fraction(1, 2)]))
    assert out.accepted and out.witness == [Fraction(1, 2)]
    assert lp_feasible(lp([{0: 1}, {0: 1}], [0, 1])).verdict is Verdict.REJECT
    P = blp_build(XXX, ONE3)
    out = lp_feasible(P)
    assert out.accepted and check_lp_point(P, out.witness)


def test_xxx_lp_is_uniform_on_the_constraint():
    P = blp_build(XXX, ONE3)
    p = relative_interior_point(P)
    lam = {k: v for k, v in zip(P.keys, p)}
    for a in t_in_k(1, 3).tuples:
        assert lam[(0, (0, 0, 0), a)] == Fraction(1, 3)
    assert lam[(1, (0,), (1,))] == Fraction(1, 3)


# -- relative interior -------------------------------------------------------------

def test_relative_interior_examples():
    assert relative_interior_point(lp([{0: 1}, {1: 1}], [Fraction(1, 3), Fraction(1, 2)])) == \
        [Fraction(1, 3), Fraction(1, 2)]
    p = relative_interior_point(lp([{0: 1, 1: 1}], [1]))
    assert p[0] > 0 and p[1] > 0 and p[0] + p[1] == 1
    assert relative_interior_point(lp([{0: 1}, {1: 1}], [0, 1])) == [0, 1]
    assert relative_interior_point(lp([{0: 1}, {0: 1}], [0, 1])) is None


def zero_set_oracle(P):
    """Coordinates whose maximum over P is 0, one LP per coordinate."""
    S = Simplex(P.n, P.rows, P.rhs, P.bounds)
    return {j for j in range(P.n) if S.maximize({j: Fraction(1)})[0] == 0}


@given(st.integers(0, 10_000), st.sampled_from([(t_in_k(1, 3), 3), (odd_k(4), 4), (nae(3), 3)]))
def test_relative_interior_zero_set(seed, Rk):
    R, k = Rk
    rng = np.random.default_rng(seed)
    X = random_instance(k, int(rng.integers(1, 5)), int(rng.integers(1, 4)), rng)
    P = blp_build(X, boolean(R))
    batched = relative_interior_point(P, "batched")
    per_var = relative_interior_point(P, "per_variable")
    if batched is None:
        assert per_var is None and not lp_feasible(P).accepted
        return
    assert check_lp_point(P, batched) and check_lp_point(P, per_var)
    zeros = zero_set_oracle(P)
    assert {j for j, v in enumerate(batched) if v == 0} == zeros
    assert {j for j, v in enumerate(per_var) if v == 0} == zeros


# -- integer systems --------------------------------------------------------------

def test_int_examples():
    assert int_feasible(intsys([{0: 3}], [1])).verdict is Verdict.REJECT
    out = int_feasible(intsys([{0: 1, 1: 1}], [1]))
    assert out.accepted and sum(out.witness) == 1
    out = int_feasible(intsys([{0: 2, 1: 4}], [6]))
    assert out.accepted and 2 * out.witness[0] + 4 * out.witness[1] == 6
    out = int_feasible(intsys([{0: 1, 1: 1}], [1], zero={0}))
    assert out.witness == [0, 1]
    assert int_feasible(intsys([{0: 1, 1: 1}, {0: 1}, {1: 1}], [1, 0, 0])).verdict is Verdict.REJECT


def determinantal_oracle(A, b):
    """Ax = b has an integer solution iff rank A = rank [A|b] = r and the gcds of
    the r x r minors of A and of [A|b] coincide."""
    M, Mb = sympy.Matrix(A), sympy.Matrix(A).row_join(sympy.Matrix(b))
    r = M.rank()
    if Mb.rank() != r:
        return False
    if r == 0:
        return True

    def gcd_minors(N):
        g = 0
        for rs in combinations(range(N.rows), r):
            for cs in combinations(range(N.cols), r):
                g = sympy.gcd(g, N.extract(list(rs), list(cs)).det())
        return abs(g)
    return gcd_minors(M) == gcd_minors(Mb)


int_systems = st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=1, max_size=4),
    st.lists(st.integers(-10, 10), min_size=4, max_size=4)))


@given(int_systems)
def test_hnf_matches_determinantal_oracle(args):
    n, A, b = args
    b = b[: len(A)]
    rows = [{j: v for j, v in enumerate(r) if v} for r in A]
    x = solve_integer(rows, b, n)
    assert (x is not None) == determinantal_oracle(A, b)
    if x is not None:
        assert all(sum(v * x[j] for j, v in r.items()) == bi for r, bi in zip(rows, b))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=1, max_size=3),
    st.lists(st.integers(-10, 10), min_size=3, max_size=3))))
def test_hnf_against_box_search(args):
    n, A, b = args
    b = np.array(b[: len(A)])
    A = np.array(A)
    grid = np.stack(np.meshgrid(*[np.arange(-50, 51)] * n, indexing="ij"), -1).reshape(-1, n)
    found = bool(np.any(np.all(grid @ A.T == b, axis=1)))
    x = solve_integer([{j: int(v) for j, v in enumerate(r) if v} for r in A], b.tolist(), n)
    # the box can only miss solutions, so a box hit must be matched
    if found:
        assert x is not None


# -- BLP / AIP construction ---------------------------------------------------------

def test_augment_unary():
    X = RelStructure(3, (Relation.of([(0, 1, 2)]),))
    Xu, Au, i = augment_unary(X, ONE3)
    assert i == 1 and len(Xu.relations) == 2 and len(Au.relations[1]) == 2
    assert augment_unary(Xu, Au) == (Xu, Au, 1)
    Eu, _, _ = augment_unary(RelStructure(4, (Relation(3, frozenset()),)), ONE3)
    assert len(Eu.relations[1]) == 4


def test_blp_variable_count():
    X = RelStructure(3, (Relation.of([(0, 1, 2)]),))
    P = blp_build(X, ONE3)
    assert P.n == 3 + 3 * 2
    mass = [r for r, b in zip(P.rows, P.rhs) if b == 1]
    assert len(mass) == 1 + 3


def test_emit_text_format():
    P = blp_build(XXX, ONE3)
    text = emit_text(P)
    assert "1*lam[0][0,0,0][0,0,1] + 1*lam[0][0,0,0][0,1,0] + 1*lam[0][0,0,0][1,0,0] = 1" in text
    assert "1*lam[1][0][0] <= 1" in text
    S = aip_build(XXX, ONE3, zero=frozenset({0}))
    assert "1*tau[0][0,0,0][0,0,1] = 0" in emit_text(S)


def test_aip_xxx_is_infeasible():
    assert aip_decide(XXX, ONE3).verdict is Verdict.REJECT
    out = blp_aip(XXX, ONE3)
    assert out.verdict is Verdict.REJECT and out.interior is not None


def test_empty_instance_accepted():
    assert lp_feasible(blp_build(EMPTY, ONE3)).accepted
    assert aip_decide(EMPTY, ONE3).accepted
    assert blp_aip(EMPTY, ONE3).accepted


@pytest.mark.parametrize("R", [t_in_k(1, 3), odd_k(4), nae(3)])
def test_planted_instances_accepted(R, rng):
    A = boolean(R)
    for _ in range(25):
        X, _ = planted_instance(R, int(rng.integers(2, 7)), int(rng.integers(1, 5)), rng)
        a = aip_decide(X, A)
        assert a.accepted and check_int_point(aip_build(X, A), a.witness)
        assert blp_aip(X, A).accepted


def test_indicator_of_homomorphism_is_an_aip_point(rng):
    X, h = planted_instance(odd_k(4), 5, 3, rng)
    S = aip_build(X, boolean(odd_k(4)))
    x = [int(tuple(h[v] for v in xs) == a) for (_, xs, a) in S.keys]
    assert check_int_point(S, x)


@given(st.integers(0, 10_000), st.sampled_from([4, 6]))
def test_aip_solves_odd_csp(seed, k):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7 if k == 6 else 9))
    X = random_instance(k, n, int(rng.integers(1, 5)), rng)
    A = boolean(odd_k(k))
    assert aip_decide(X, A).accepted == (find_homomorphism(X, A) is not None)


@given(st.integers(0, 10_000))
def test_blp_aip_accept_implies_aip_accept(seed):
    rng = np.random.default_rng(seed)
    for R, k in ((t_in_k(1, 3), 3), (t_in_k(1, 4).union([(1, 1, 1, 0)]), 4)):
        X = random_instance(k, int(rng.integers(1, 5)), int(rng.integers(1, 4)), rng)
        if blp_aip(X, boolean(R)).accepted:
            assert aip_decide(X, boolean(R)).accepted

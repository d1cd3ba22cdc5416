"""Half-twist engine.  Frozen sl2 matrices come from tests/oracles/sl2_sympy.py
(an independent sympy computation with s = v = q^(1/4))."""

from fractions import Fraction

import pytest

from halfrib.halftwist import (
    RibbonChoice,
    antipode_of,
    braid_op,
    braiding,
    braiding_is_intertwiner,
    classify_ribbons,
    conjugation_check,
    drinfeld_u,
    fs_indicator,
    grouplike_g,
    half_twist,
    half_twist_by_decomposition,
    half_twist_inverse,
    half_twist_report,
    ribbon_operator,
    ribbon_scalar,
    self_test,
    sl2_uniqueness_check,
    t_word,
    verify_ribbon_axioms,
    yang_baxter_check,
)
from halfrib.linalg import SparseMatrix
from halfrib.modules import decompose, dual, irrep, tensor, trivial
from halfrib.rootdata import build_root_datum, order2_characters
from halfrib.scalars import GaussianRational, Scalar, q_power, v_power


def dense(rows, L):
    """Matrix from a list of rows of (coeff, v-exponent) pairs or 0."""
    out = {}
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x:
                out.setdefault(i, {})[j] = x if isinstance(x, Scalar) else v_power(x[1], L) * x[0]
    return SparseMatrix(len(rows), len(rows[0]), out, L)


def test_braid_operator_on_sl2_standard(V):
    T = braid_op(V, 0)
    assert T == dense([[0, (1, 0)], [(-1, 4), 0]], 4)
    one = Scalar.one(4)
    assert T.apply({1: one}) == {0: one}  # T v- = v+
    assert T.apply({0: one}) == {1: -q_power(1, 4)}  # T v+ = -q v-


def test_braid_operator_middle_of_spin_one(V2):
    T = braid_op(V2, 0)
    assert T.get(1, 1) == -q_power(2, 4)


def test_half_twist_on_sl2_standard(V):
    X = half_twist(V)
    assert X == dense([[0, (1, 3)], [(-1, 3), 0]], 4)
    # X v+ = -q^(3/4) v-, X^2 = -q^(3/2)
    assert X.apply({0: Scalar.one(4)}) == {1: -q_power(Fraction(3, 4), 4)}
    assert (X @ X).is_scalar(-q_power(Fraction(3, 2), 4))


def test_trivial_summand_fixed_by_x(V):
    VV = tensor(V, V)
    X = half_twist(VV)
    (u0,) = [s for s in decompose(VV) if s.weight == (0,)]
    vec = u0.embedding.column(0)
    assert X.apply(vec) == vec


@pytest.mark.parametrize("rank,lam", [(2, (1, 0)), (3, (1, 0, 0)), (3, (0, 1, 0))])
def test_braid_relations(rank, lam):
    d = build_root_datum("A", rank)
    M = irrep(d, lam)
    for i in d.nodes:
        for j in d.nodes:
            if d.cartan[i][j] == -1:
                assert t_word(M, (i, j, i)) == t_word(M, (j, i, j))
            elif i != j:
                assert t_word(M, (i, j)) == t_word(M, (j, i))


@pytest.mark.parametrize("rank,lam", [(1, (2,)), (2, (1, 1)), (3, (0, 1, 0))])
def test_weight_behaviour(rank, lam):
    d = build_root_datum("A", rank)
    M = irrep(d, lam)
    X = half_twist(M)
    for i in d.nodes:
        T = braid_op(M, i)
        for col in range(M.dim):
            for row in T.column(col):
                assert M.weights[row] == d.reflect(i, M.weights[col])
    for col in range(M.dim):
        for row in X.column(col):
            assert M.weights[row] == d.w0(M.weights[col])


def test_braid_routes_agree_on_tensors(V, V2):
    for M in (tensor(V, V), tensor(V2, V), tensor(V, V2)):
        assert braid_op(M, 0, route="direct") == braid_op(M, 0, route="coproduct")


def test_half_twist_routes_agree(V, V2, a2):
    A, B = irrep(a2, (1, 0)), irrep(a2, (0, 1))
    for M in (tensor(V, V), tensor(V, V2), tensor(V2, V2), tensor(A, B), tensor(A, A)):
        assert half_twist(M) == half_twist_by_decomposition(M)


def test_r_matrix_on_vv(V):
    R = braiding(V, V).R
    expected = dense(
        [
            [(1, 2), 0, 0, 0],
            [0, (1, -2), v_power(2, 4) - v_power(-6, 4), 0],
            [0, 0, (1, -2), 0],
            [0, 0, 0, (1, 2)],
        ],
        4,
    )
    assert R == expected
    assert braiding(V, V, route="decomposition").R == R


@pytest.mark.parametrize("rank", [1, 2])
def test_braiding_intertwines_and_satisfies_yang_baxter(rank):
    d = build_root_datum("A", rank)
    V = irrep(d, d.fundamental(0))
    assert braiding_is_intertwiner(V, V)
    assert yang_baxter_check(V)


def test_braiding_intertwines_mixed_pairs(V, V2, a2):
    assert braiding_is_intertwiner(V, V2)
    assert braiding_is_intertwiner(V2, V)
    assert braiding_is_intertwiner(irrep(a2, (1, 0)), irrep(a2, (0, 1)))


def test_drinfeld_u_on_sl2(V):
    assert drinfeld_u(V) == dense([[(1, -2), 0], [0, (1, -10)]], 4)


@pytest.mark.parametrize("rank,lam", [(1, (1,)), (1, (2,)), (2, (1, 0))])
def test_u_equals_antipode_of_x_inverse_times_x_inverse(rank, lam):
    M = irrep(build_root_datum("A", rank), lam)
    assert drinfeld_u(M) == antipode_of(half_twist_inverse, M) @ half_twist_inverse(M)


def test_grouplike_on_sl2(V, a1):
    C, H = RibbonChoice.standard(), RibbonChoice.half()
    assert grouplike_g(C, V) == dense([[(1, 4), 0], [0, (1, -4)]], 4)
    assert grouplike_g(H, V) == dense([[(-1, 4), 0], [0, (-1, -4)]], 4)
    for c in (C, H):
        assert grouplike_g(c, trivial(a1)).is_scalar(Scalar.one(4))


@pytest.mark.parametrize("c", [RibbonChoice.standard(), RibbonChoice.half()])
def test_g_is_grouplike(c, V, V2):
    for M, N in ((V, V), (V, V2)):
        assert grouplike_g(c, tensor(M, N)) == grouplike_g(c, M).kron(grouplike_g(c, N))


def test_ribbon_scalar_examples(a1, a2):
    C, H = RibbonChoice.standard(), RibbonChoice.half()
    assert ribbon_scalar(C, a1, (1,)) == v_power(-6, 4)
    assert ribbon_scalar(H, a1, (1,)) == -v_power(-6, 4)
    for c in (C, H):
        for d in (a1, a2):
            assert ribbon_scalar(c, d, d.zero) == Scalar.one(d.L)


def test_ribbon_scalar_matches_operator(V2, a2):
    for c in (RibbonChoice.standard(), RibbonChoice.half()):
        assert ribbon_operator(c, V2).is_scalar(ribbon_scalar(c, V2.datum, (2,)))
        W = irrep(a2, (1, 1))
        assert ribbon_operator(c, W).is_scalar(ribbon_scalar(c, a2, (1, 1)))


def test_fs_examples(V, a2):
    assert fs_indicator(RibbonChoice.standard(), V) == -1
    assert fs_indicator(RibbonChoice.half(), V) == 1
    assert fs_indicator(RibbonChoice.half(), irrep(a2, (1, 0))) == 0
    assert fs_indicator(RibbonChoice.standard(), irrep(a2, (1, 0))) == 0


def test_ribbon_axioms_examples(a1):
    h = verify_ribbon_axioms(RibbonChoice.half(), a1, [(1,)])
    assert all(h.values()), h
    c = verify_ribbon_axioms(RibbonChoice.standard(), a1, [(1,), (2,)])
    assert all(c.values()), c
    bad = verify_ribbon_axioms(RibbonChoice("x-inverse"), a1, [(1,)])
    assert bad["central"] is False


def test_classification(a1, a2, a3):
    r1, r2, r3 = classify_ribbons(a1), classify_ribbons(a2), classify_ribbons(a3)
    assert [len(r.choices) for r in (r1, r2, r3)] == [2, 1, 2]
    assert [c.is_standard for c in r1.choices] == [False, True]
    assert [c.is_standard for c in r2.choices] == [True]
    assert [c.is_standard for c in r3.choices] == [False, True]
    assert all(c.verified for r in (r1, r2, r3) for c in r.choices)


def test_a3_standard_is_twist_by_square_of_order_four_character(a3):
    r = classify_ribbons(a3)
    assert r.standard_character is not None and not r.standard_character.is_trivial()
    assert len(r.standard_square_roots) == 2
    # one square root acts by -i on the standard rep
    assert GaussianRational(0, -1) in [phi((1, 0, 0)) for phi in r.standard_square_roots]
    for phi in r.standard_square_roots:
        assert phi ** 2 == r.standard_character


def test_sl2_uniqueness(a1):
    q = q_power(1, 4)
    rep = sl2_uniqueness_check([Scalar.one(4), q, "formal"])
    assert rep["all_equal"]
    assert not rep["x_minus_two_equals_C_on_standard"]
    assert rep["no_half_ribbon_gives_C"]


def test_self_test_passes():
    assert self_test() == []


@pytest.mark.parametrize("rank,lam", [(1, (3,)), (2, (2, 1)), (3, (0, 0, 1))])
def test_half_twist_report(rank, lam):
    rep = half_twist_report(irrep(build_root_datum("A", rank), lam))
    assert all(rep.values()), rep


def test_conjugation_on_tensor(V, a2):
    assert conjugation_check(tensor(V, V))
    assert conjugation_check(dual(irrep(a2, (1, 0)), "left"))


def test_twisted_fs_follows_character(a3):
    for phi in order2_characters(a3):
        c = RibbonChoice.twisted(phi)
        for lam in ((0, 1, 0), (1, 0, 1)):
            assert fs_indicator(c, irrep(a3, lam)) == int(phi(lam))

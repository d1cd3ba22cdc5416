import pytest
from hypothesis import given, settings, strategies as st

from halfrib import modules as mods
from halfrib.modules import (
    ModuleError,
    decompose,
    dual,
    fundamental,
    hom_space,
    irrep,
    singular_vectors,
    tensor,
    trivial,
    twist,
)
from halfrib.rootdata import build_root_datum
from halfrib.scalars import Scalar, q_power


def weyl_dim_oracle(d, lam):
    """Weyl dimension formula over positive roots, written out for type A."""
    n = d.rank + 1
    # highest weight in epsilon coordinates: partition l_1 >= ... >= l_n
    parts = [sum(lam[i:]) for i in range(d.rank)] + [0]
    num = den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= parts[i] - parts[j] + j - i
            den *= j - i
    return num // den


def test_sl2_defining_rep(a1):
    V = fundamental(a1, 0)
    L = a1.L
    one = Scalar.one(L)
    assert V.dim == 2 and V.weights == ((1,), (-1,))
    assert V.E[0].apply({1: one}) == {0: one}
    assert V.F[0].apply({0: one}) == {1: one}
    assert V.K(0).get(0, 0) == q_power(1, L)


@pytest.mark.parametrize("rank,k,dim", [(2, 1, 3), (3, 1, 6), (3, 0, 4), (3, 2, 4)])
def test_fundamental_dimensions(rank, k, dim):
    d = build_root_datum("A", rank)
    assert fundamental(d, k).dim == dim


@pytest.mark.parametrize(
    "rank,lam,dim",
    [(1, (2,), 3), (1, (1,), 2), (2, (1, 1), 8), (2, (2, 1), 15), (3, (1, 0, 1), 15), (3, (0, 2, 0), 20)],
)
def test_irrep_dimensions(rank, lam, dim):
    d = build_root_datum("A", rank)
    assert irrep(d, lam).dim == dim == weyl_dim_oracle(d, lam)


def test_irrep_rejects_non_dominant(a2):
    with pytest.raises(ModuleError):
        irrep(a2, (1, -1))


def test_tensor_coproduct_on_sl2(V):
    L = V.L
    one = Scalar.one(L)
    VV = tensor(V, V)
    # basis index a*2 + b for v_a (x) v_b; v+ = 0, v- = 1
    assert VV.E[0].apply({1: one}) == {0: one}
    assert sorted(VV.weights) == [(-2,), (0,), (0,), (2,)]
    assert VV.K(0) == V.K(0).kron(V.K(0))


def test_left_dual_of_sl2(V):
    Vd = dual(V, "left")
    one = Scalar.one(V.L)
    # f+ has index 0; E f+ = -q f-
    assert Vd.E[0].apply({0: one}) == {1: -q_power(1, V.L)}


def test_dual_of_trivial(a2):
    one = trivial(a2)
    assert dual(one, "left").same_action(one)
    assert dual(one, "right").same_action(one)


@pytest.mark.parametrize("rank,lam", [(1, (1,)), (1, (2,)), (2, (1, 0)), (2, (1, 1)), (3, (0, 1, 0))])
def test_right_then_left_dual_recovers_module(rank, lam):
    M = irrep(build_root_datum("A", rank), lam)
    assert dual(dual(M, "right"), "left").same_action(M)
    assert dual(dual(M, "left"), "right").same_action(M)


def test_singular_vectors_of_vv(V):
    VV = tensor(V, V)
    sv = dict(singular_vectors(VV))
    one = Scalar.one(V.L)
    assert sv[(2,)] == {0: one}
    w = sv[(0,)]
    # proportional to v+ (x) v- - q^-1 v- (x) v+
    ratio = w[1]
    assert w[2] / ratio == -q_power(-1, V.L)
    assert set(w) == {1, 2}


def test_singular_vectors_a2_three_by_three_bar(a2):
    M = tensor(irrep(a2, (1, 0)), irrep(a2, (0, 1)))
    at_zero = [w for mu, w in singular_vectors(M) if mu == (0, 0)]
    assert len(at_zero) == 1


def test_hom_space_dimensions(V, a2):
    assert len(hom_space(V, V)) == 1
    assert len(hom_space(V, dual(V, "left"))) == 1
    W = irrep(a2, (1, 0))
    assert len(hom_space(W, dual(W, "left"))) == 0


def test_intertwiners_commute(V, V2):
    for M, N in ((V, dual(V, "left")), (tensor(V, V), tensor(V, V)), (tensor(V, V), V2)):
        for f in hom_space(M, N):
            assert f.commutes()


def test_decompose_vv(V):
    parts = decompose(tensor(V, V))
    assert sorted(p.weight for p in parts) == [(0,), (2,)]


def test_twist_swaps_generators(a2):
    W = irrep(a2, (1, 0))
    T = twist(W)
    assert sorted(T.weights) == sorted(a2.w0(w) for w in W.weights)
    assert T.relation_failures() == []


IN_SCOPE = [("A", 1, (1,)), ("A", 1, (2,)), ("A", 1, (3,)), ("A", 2, (1, 0)), ("A", 2, (0, 1)), ("A", 2, (1, 1)), ("A", 3, (1, 0, 0)), ("A", 3, (0, 1, 0))]


@pytest.mark.parametrize("kind,rank,lam", IN_SCOPE)
def test_relations_on_irreps_and_duals(kind, rank, lam):
    M = irrep(build_root_datum(kind, rank), lam)
    assert M.relation_failures() == []
    assert dual(M, "left").relation_failures() == []
    assert dual(M, "right").relation_failures() == []


@settings(max_examples=12)
@given(st.sampled_from(IN_SCOPE), st.sampled_from(IN_SCOPE))
def test_relations_on_random_tensor_pairs(x, y):
    if x[:2] != y[:2]:
        return
    d = build_root_datum(*x[:2])
    M = tensor(irrep(d, x[2]), irrep(d, y[2]))
    if M.dim <= 20:
        assert M.relation_failures() == []
    else:
        # spot check: grading and [E_i, F_i] on every node
        for i in d.nodes:
            lhs = M.E[i] @ M.F[i] - M.F[i] @ M.E[i]
            qi = q_power(d.d[i], M.L)
            rhs = (M.K(i) - M.K(i, -1)).scale((qi - qi.inverse()).inverse())
            assert lhs == rhs


def test_tensor_associative(a2):
    A, B = irrep(a2, (1, 0)), irrep(a2, (0, 1))
    left = tensor(tensor(A, B), A)
    right = tensor(A, tensor(B, A))
    assert left.same_action(right)


def test_irrep_disk_cache_round_trip(monkeypatch, tmp_path, a2):
    monkeypatch.setenv("HALFRIB_CACHE_DIR", str(tmp_path))
    lam = (2, 0)
    built = mods._build_irrep(a2, lam)
    mods._store_cached(built)
    files = list(tmp_path.glob("irrep-*.json"))
    assert len(files) == 1
    loaded = mods._load_cached(a2, lam)
    assert loaded is not None and loaded.same_action(built)

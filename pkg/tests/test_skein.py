"""TL algebra and the Kauffman bracket oracle.  Bracket values are checked
against tests/oracles/sl2_sympy.py, an independent PD-code state sum."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from halfrib.halftwist import RibbonChoice
from halfrib.scalars import Scalar, q_power, v_power
from halfrib.skein import (
    PlanarDiagram,
    SkeinElement,
    calibrate,
    differential_test,
    fs_point,
    kauffman_bracket,
    kauffman_bracket_by_composition,
    loop_value,
    tl_compose,
)
from halfrib.tangles import Diagram, DiagramError, Slice, braid_closure, link_invariant, writhe

DELTA = loop_value()
L = 4


def el(p, c=None):
    return SkeinElement.of(p, c)


def test_e_squared_is_delta_e():
    e = PlanarDiagram.e(2, 0)
    assert tl_compose(el(e), el(e)) == el(e, DELTA)


def test_identity_is_neutral():
    p = PlanarDiagram.e(4, 1)
    assert tl_compose(el(PlanarDiagram.identity(4)), el(p)) == el(p)
    assert tl_compose(el(p), el(PlanarDiagram.identity(4))) == el(p)


def test_cup_then_cap_is_a_circle():
    circle = tl_compose(el(PlanarDiagram.cup(0, 0)), el(PlanarDiagram.cap(2, 0)))
    assert circle.scalar() == -q_power(1, L) - q_power(-1, L)


def test_width_mismatch():
    with pytest.raises(ValueError):
        tl_compose(el(PlanarDiagram.identity(2)), el(PlanarDiagram.identity(3)))


def test_temperley_lieb_relations():
    e0, e1 = PlanarDiagram.e(3, 0), PlanarDiagram.e(3, 1)
    assert tl_compose(tl_compose(el(e0), el(e1)), el(e0)) == el(e0)
    assert tl_compose(tl_compose(el(e1), el(e0)), el(e1)) == el(e1)


def test_non_planar_matching_rejected():
    with pytest.raises(ValueError):
        PlanarDiagram(2, 2, (3, 2, 1, 0))


def test_fs_of_the_point():
    assert fs_point() == 1
    ident = PlanarDiagram.identity(1)
    assert ident.rotate180() == ident


def _random_planar(draw, n_bottom, n_top):
    """Random planar matching by recursive splitting of the boundary circle."""
    n = n_bottom + n_top
    order = list(range(n_bottom)) + [n_bottom + k for k in reversed(range(n_top))]
    match = [None] * n

    def fill(seg):
        if not seg:
            return
        j = draw(st.sampled_from(range(1, len(seg), 2)))
        a, b = seg[0], seg[j]
        match[a], match[b] = b, a
        fill(seg[1:j])
        fill(seg[j + 1:])

    fill(order)
    return PlanarDiagram(n_bottom, n_top, tuple(match))


widths = st.sampled_from([0, 2, 4])


@given(st.data(), widths, widths, widths, widths)
def test_composition_is_associative(data, a, b, c, d):
    p = _random_planar(data.draw, a, b)
    q = _random_planar(data.draw, b, c)
    r = _random_planar(data.draw, c, d)
    lhs = tl_compose(tl_compose(el(p), el(q)), el(r))
    rhs = tl_compose(el(p), tl_compose(el(q), el(r)))
    assert lhs == rhs


@given(st.data(), widths, widths)
def test_rotation_is_an_involution(data, a, b):
    p = _random_planar(data.draw, a, b)
    assert p.rotate180().rotate180() == p


# -- bracket -------------------------------------------------------------------


def unknot():
    return braid_closure(1, [])


def test_bracket_unknot_and_unlink():
    assert kauffman_bracket(unknot()) == DELTA
    assert kauffman_bracket(braid_closure(2, [])) == DELTA * DELTA


def A_poly(terms):
    """Laurent polynomial in A = v^2."""
    out = Scalar.zero(L)
    for e, c in terms.items():
        out = out + v_power(2 * e, L) * c
    return out


def test_bracket_trefoil_matches_pd_oracle():
    # PD oracle: <trefoil>/<unknot> = -A^5 - A^-3 + A^-7
    expected = A_poly({5: -1, -3: -1, -7: 1}) * DELTA
    assert kauffman_bracket(braid_closure(2, [1, 1, 1])) == expected


def test_bracket_figure_eight_matches_pd_oracle():
    expected = A_poly({8: 1, 4: -1, 0: 1, -4: -1, -8: 1}) * DELTA
    assert kauffman_bracket(braid_closure(3, [1, -2, 1, -2])) == expected


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=7))
def test_state_sum_and_composition_agree(word):
    d = braid_closure(3, word)
    assert kauffman_bracket(d) == kauffman_bracket_by_composition(d)


def test_kink_ratio_is_a_monomial_removed_by_writhe():
    A = q_power(Fraction(1, 2), L)
    for g in (1, -1):
        d = braid_closure(2, [g])
        ratio = kauffman_bracket(d) / kauffman_bracket(unknot())
        assert ratio.monomial_terms() is not None
        assert (-(A ** 3)) ** (-writhe(d)) * ratio == Scalar.one(L)


def test_bracket_rejects_half_twists_and_crossing_cap():
    from halfrib.tangles import Interval

    up = Interval("V")
    d = Diagram((), [Slice("cup", 0, cup_left=up), Slice("h+", 0, n=2), Slice("cap", 0)])
    with pytest.raises(DiagramError):
        kauffman_bracket(d)
    with pytest.raises(DiagramError):
        kauffman_bracket(braid_closure(2, [1] * 17))


# -- differential test ---------------------------------------------------------


@pytest.fixture(scope="module")
def functor_value(V):
    reps = {"V": V}
    return lambda d, normalize: link_invariant(d, RibbonChoice.half(), reps, normalize=normalize)


CAL = [("unknot", braid_closure(1, [])), ("hopf", braid_closure(2, [1, 1]))]
HELD = [("trefoil", braid_closure(2, [1, 1, 1])), ("figure8", braid_closure(3, [1, -2, 1, -2]))]


def test_differential_normalized(functor_value):
    rep = differential_test(CAL, HELD, functor_value)
    assert rep["determined"] and rep["all_match"]
    assert rep["equivalence_classes"] == 1


def test_framed_calibration_reports_underdetermination(functor_value):
    rep = differential_test(CAL, HELD, functor_value, mode="framed")
    assert not rep["determined"]
    assert rep["equivalence_classes"] == 2
    assert "underdetermined" in rep["notes"][0]


def test_framed_calibration_with_a_kink(functor_value):
    rep = differential_test(CAL + [("kink", braid_closure(2, [1]))], HELD, functor_value, mode="framed")
    assert rep["determined"] and rep["all_match"]


def test_mirror_convention_is_rejected(functor_value):
    """A^2 = q^-1 fails already on the oriented Hopf link (linking number +1)."""
    Ai = q_power(Fraction(-1, 2), L)
    pairs = [(d, functor_value(d, True), writhe(d)) for _, d in CAL]
    cal = calibrate(pairs, A_options=[Ai])
    assert not cal.candidates and not cal.determined
